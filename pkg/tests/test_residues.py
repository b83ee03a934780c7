import random

import pytest

from hilbertpoincare.errors import BudgetExceeded, NotInvertible
from hilbertpoincare.ideals import (ideal_from_generators, ideals_of_norm,
                                    prime_splitting, principal_ideal,
                                    unit_ideal)
from hilbertpoincare.residues import residue_ring


def scan_inverse(ring, x):
    """Brute-force inverse oracle: scan all representatives."""
    one = ring.reduce(ring.field.one())
    for y in ring.reps():
        if ring.reduce(x * y) == one:
            return y
    return None


def test_ring_examples(F5):
    r2 = residue_ring(principal_ideal(F5.from_int(2)))
    assert len(r2.reps()) == 4
    assert {(u.a, u.b) for u in r2.unit_reps()} == {(1, 0), (0, 1), (1, 1)}
    p5 = prime_splitting(F5, 5).primes[0]
    rp5 = residue_ring(p5)
    assert len(rp5.reps()) == 5 and len(rp5.unit_reps()) == 4
    r1 = residue_ring(unit_ideal(F5))
    assert r1.size == 1


def test_budget():
    from hilbertpoincare.field import make_field
    F = make_field(2)
    with pytest.raises(BudgetExceeded):
        residue_ring(principal_ideal(F.from_int(10**5)), budget=10**6)


def test_inverse_examples(F5):
    r2 = residue_ring(principal_ideal(F5.from_int(2)))
    assert r2.inverse(F5.omega()) == F5.elt(1, 1)
    rp5 = residue_ring(prime_splitting(F5, 5).primes[0])
    assert rp5.inverse(F5.from_int(2)) == F5.from_int(3)
    with pytest.raises(NotInvertible):
        r2.inverse(F5.zero())


def test_reduce_examples(F5):
    r2 = residue_ring(principal_ideal(F5.from_int(2)))
    assert r2.reduce(F5.elt(3, 2)) == F5.elt(1, 0)
    assert r2.reduce(F5.zero()) == F5.zero()
    rp5 = residue_ring(prime_splitting(F5, 5).primes[0])
    assert rp5.reduce(F5.elt(2, 1)) == F5.zero()
    # idempotence
    x = F5.elt(-7, 11)
    assert r2.reduce(r2.reduce(x)) == r2.reduce(x)


def test_unit_count_matches_phi(F5, F2):
    rng = random.Random(9)
    for F in (F5, F2):
        done = 0
        while done < 50:
            n = rng.randint(2, 400)
            opts = ideals_of_norm(F, n)
            if not opts:
                continue
            ring = residue_ring(rng.choice(opts))
            assert len(ring.unit_reps()) == ring.euler_phi()
            done += 1


def test_inverse_involution_and_oracle(F5):
    rng = random.Random(21)
    mods = [principal_ideal(F5.from_int(2)),
            prime_splitting(F5, 5).primes[0],
            principal_ideal(F5.elt(1, 3)),
            ideal_from_generators([F5.elt(4, 2), F5.elt(6, 0)])]
    for mod in mods:
        ring = residue_ring(mod)
        one = ring.reduce(F5.one())
        for x in ring.unit_reps():
            y = ring.inverse(x)
            assert ring.reduce(x * y) == one
            assert ring.inverse(y) == ring.reduce(x)
        # scan oracle on a sample
        sample = ring.unit_reps()
        rng.shuffle(sample)
        for x in sample[:6]:
            assert ring.inverse(x) == scan_inverse(ring, x)
