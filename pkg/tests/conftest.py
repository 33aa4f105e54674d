import json

import pytest

from semlatex.evaluator import VarBox
from semlatex.lexicon import default_lexicon
from semlatex.verifier import RelationCase

SINE_ADDITION_LHS = r"\sin@{u+v}"
SINE_ADDITION_RHS = r"\sin@{u}\cos@{v}+\cos@{u}\sin@{v}"


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def swapped_lexicon(lexicon):
    return lexicon.with_patterns_swapped("sin", "cos")


@pytest.fixture
def sine_addition():
    box = dict(re_min=-2, re_max=2, im_min=-2, im_max=2)
    return RelationCase("dlmf-4.21.2", SINE_ADDITION_LHS, SINE_ADDITION_RHS,
                        (VarBox("u", **box), VarBox("v", **box)), (), "DLMF 4.21.2")


@pytest.fixture
def sinh_addition():
    box = dict(re_min=-2, re_max=2, im_min=-2, im_max=2)
    return RelationCase("sinh-addition", r"\sinh@{x+\iunit y}",
                        r"\sinh@@{x}\cos@@{y}+\iunit\cosh@@{x}\sin@@{y}",
                        (VarBox("x", **box), VarBox("y", **box)))


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path
    return write
