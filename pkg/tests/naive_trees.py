"""Straightforward reference implementations on planar nested tuples.

A raw tree is ``(dec, [(edge, child), ...])`` with ``edge`` either a tuple or
``"Xi"``. Every sum is taken over explicit node paths and only the final
results are canonicalised, so these share no code with the grafting engine.
"""

from __future__ import annotations

import itertools
import math
import random

from postlie.trees import XI, canonicalize


def to_canonical(raw):
    dec, kids = raw
    return canonicalize((dec, [(XI if e == "Xi" else e, to_canonical(c)) for e, c in kids]))


def paths(raw, prefix=(), xi_leaf=False):
    yield prefix, xi_leaf
    for n, (e, c) in enumerate(raw[1]):
        yield from paths(c, prefix + (n,), e == "Xi")


def at(raw, path):
    for n in path:
        raw = raw[1][n][1]
    return raw


def rebuild(raw, path, fn):
    if not path:
        return fn(raw)
    dec, kids = raw
    kids = list(kids)
    e, c = kids[path[0]]
    kids[path[0]] = (e, rebuild(c, path[1:], fn))
    return dec, kids


def _acc(out, raw, c):
    t = to_canonical(raw)
    out[t] = out.get(t, 0) + c
    if out[t] == 0:
        del out[t]


def graft(sigma, a, tau):
    out = {}
    for p, xi in paths(tau):
        if not xi:
            _acc(out, rebuild(tau, p, lambda t: (t[0], list(t[1]) + [(tuple(a), sigma)])), 1)
    return out


def uparrow(tau, i):
    out = {}
    for p, xi in paths(tau):
        if not xi:
            _acc(out, rebuild(tau, p, lambda t: (tuple(x + (j == i) for j, x in enumerate(t[0])),
                                                 t[1])), 1)
    return out


def deformed_graft(sigma, a, tau, stratum=None):
    out = {}
    for p, xi in paths(tau):
        if xi:
            continue
        n = at(tau, p)[0]
        for ell in itertools.product(*(range(x + 1) for x in n)):
            if stratum is not None and sum(ell) != stratum:
                continue
            edge = tuple(x - y for x, y in zip(a, ell))
            if min(edge) < 0:
                continue
            w = math.prod(math.comb(x, y) for x, y in zip(n, ell))

            def fn(t, ell=ell, edge=edge):
                return tuple(x - y for x, y in zip(t[0], ell)), list(t[1]) + [(edge, sigma)]

            _acc(out, rebuild(tau, p, fn), w)
    return out


def random_raw_tree(rng: random.Random, width: int, max_edges: int, max_dec: int):
    """Random tree with at most ``max_edges`` edges and decorations ``<= max_dec``."""
    budget = [rng.randint(0, max_edges)]

    def dec():
        return tuple(rng.randint(0, max_dec) for _ in range(width))

    def grow():
        node = dec()
        kids = []
        has_xi = False
        while budget[0] > 0 and rng.random() < 0.6:
            budget[0] -= 1
            if not has_xi and rng.random() < 0.25:
                has_xi = True
                kids.append(("Xi", ((0,) * width, [])))
            else:
                kids.append((dec(), grow()))
        return node, kids

    return grow()


def shuffle_children(raw, rng: random.Random):
    dec, kids = raw
    kids = [(e, shuffle_children(c, rng)) for e, c in kids]
    rng.shuffle(kids)
    return dec, kids
