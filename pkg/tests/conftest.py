from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus as corpus_mod


@pytest.fixture(scope="session")
def sn_samples():
    return corpus_mod.generate_sn_samples(200, seed=1)


@pytest.fixture(scope="session")
def corpus(sn_samples):
    from setlam import minimal_context, parse_term, synthesize_type

    entries = [
        corpus_mod.Entry(None, term, minimal_context(term))
        for term in map(parse_term, corpus_mod.WORKED_TERMS)
    ]
    for m, inferred in sn_samples:
        entries.append(corpus_mod.Entry(m, inferred.term, inferred.context))
    for entry in entries:
        synthesize_type(entry.term)
    return entries
