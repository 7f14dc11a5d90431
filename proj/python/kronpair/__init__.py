"""Kronecker-set pair constructions with exact certificates.

Rationals and angles are passed as "num/den" strings (plain ints are
accepted too). Commands return ``(exit_code, document)``; the remaining
functions return decoded JSON and raise ``KronpairError`` on failure.
"""

import json

from . import _core
from ._core import KronpairError

__all__ = [
    "KronpairError",
    "construct",
    "verify",
    "witness",
    "oracle",
    "hadamard_interpolate",
    "ladder_interpolate",
    "minimax_torus_grid",
    "epsilon_q",
    "epsilon_q_chord",
    "circular_distance",
    "chord_approx",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def _strs(xs):
    return [str(x) for x in xs]


def _command(result):
    code, text = result
    return code, json.loads(text)


def construct(config, seed=None):
    return _command(_core.construct(_text(config), seed))


def verify(document):
    return _command(_core.verify(_text(document)))


def witness(result, m, seed=1, budget=None, trivial=False, allow_extend=True):
    return _command(_core.witness(_text(result), m, seed, budget, trivial, allow_extend))


def oracle(result, grid=None, cap=None):
    return _command(_core.oracle(_text(result), grid, cap))


def hadamard_interpolate(frequencies, targets, q):
    return json.loads(_core.hadamard_interpolate(_strs(frequencies), _strs(targets), str(q)))


def ladder_interpolate(lambdas, shifts, targets, q):
    return json.loads(_core.ladder_interpolate(_strs(lambdas), _strs(shifts), _strs(targets), str(q)))


def minimax_torus_grid(frequencies, targets, resolution):
    return json.loads(_core.minimax_torus_grid(_strs(frequencies), _strs(targets), resolution))


def epsilon_q(q):
    return _core.epsilon_q(str(q))


def epsilon_q_chord(q):
    return _core.epsilon_q_chord(str(q))


def circular_distance(a, b):
    return _core.circular_distance(str(a), str(b))


def chord_approx(distance):
    return _core.chord_approx(str(distance))
