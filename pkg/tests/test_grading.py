from __future__ import annotations

import itertools
import random

import pytest

from iterforms import grading
from iterforms.errors import UsageError
from iterforms.grading import ChartSpec


def test_dot_examples():
    assert grading.dot((1, 0), (0, 1)) == 0
    assert grading.dot((1, 0), (1, 0)) == 1
    assert grading.dot((1, 1), (1, 1)) == 2


def test_dot_length_mismatch():
    with pytest.raises(UsageError):
        grading.dot((1, 0), (1, 0, 0))


def test_commutation_sign_examples():
    d1, d2, d12 = (1, 0), (0, 1), (1, 1)
    assert grading.commutation_sign(d1, d2) == 1
    assert grading.commutation_sign(d1, d1) == -1
    assert grading.commutation_sign(d12, d12) == 1


def _bubble_sign(degrees, perm):
    arr = list(perm)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                sign *= grading.commutation_sign(degrees[arr[j]], degrees[arr[j + 1]])
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
    return sign


def test_reorder_sign_examples():
    assert grading.reorder_sign([(1, 0), (1, 0)], [1, 0]) == -1
    assert grading.reorder_sign([(1, 0), (0, 1)], [1, 0]) == 1
    odd = (1, 0)
    assert grading.reorder_sign([odd, odd, odd], [1, 2, 0]) == 1


def test_reorder_sign_matches_bubble_sort():
    rng = random.Random(3)
    for _ in range(200):
        m = rng.randint(1, 5)
        degs = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(m)]
        perm = list(range(m))
        rng.shuffle(perm)
        assert grading.reorder_sign(degs, perm) == _bubble_sign(degs, perm)


def test_mask_helpers_round_trip():
    for slots in (1, 2, 3, 4):
        for r in range(slots + 1):
            for labels in itertools.combinations(range(1, slots + 1), r):
                mask = grading.mask_of(labels, slots)
                assert grading.labels_of(mask) == labels
                assert sum(grading.mask_degree(mask, slots)) == len(labels)


def test_chart_validation():
    assert ChartSpec(2, 1).names == ("x1", "x2")
    assert ChartSpec(1, 3).slots == 4
    with pytest.raises(UsageError):
        ChartSpec(0, 1)
    with pytest.raises(UsageError):
        ChartSpec(1, 0)
    with pytest.raises(UsageError):
        ChartSpec(2, 1, names=("x", "x"))


def test_sign_symmetry_and_dot_bilinearity():
    rng = random.Random(8)
    for _ in range(200):
        g, h, f = (tuple(rng.randint(-3, 3) for _ in range(4)) for _ in range(3))
        assert grading.commutation_sign(g, h) == grading.commutation_sign(h, g)
        assert grading.dot(grading.add(g, f), h) == grading.dot(g, h) + grading.dot(f, h)
        assert grading.commutation_sign(grading.add(g, f), h) == (
            grading.commutation_sign(g, h) * grading.commutation_sign(f, h))


def test_reorder_sign_all_permutations():
    rng = random.Random(6)
    for m in range(1, 7):
        degs = [tuple(rng.randint(-1, 2) for _ in range(3)) for _ in range(m)]
        for perm in itertools.permutations(range(m)):
            assert grading.reorder_sign(degs, perm) == _bubble_sign(degs, perm)
