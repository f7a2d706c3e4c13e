"""Hypothesis strategies shared across test modules."""

from fractions import Fraction

import hypothesis.strategies as st

from qtmlab.exact import CycQ8
from qtmlab.machines import MOVES, SYMBOLS, make_machine

small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)

nonzero_cyc = (
    st.tuples(small_rationals, small_rationals, small_rationals, small_rationals)
    .map(lambda t: CycQ8(*t))
    .filter(lambda a: not a.is_zero())
)


@st.composite
def machines(draw, kind=None):
    """Structurally valid machines of any kind; QTMs are usually not unitary."""
    if kind is None:
        kind = draw(st.sampled_from(("tm", "ptm", "qtm")))
    n_live = draw(st.integers(min_value=1, max_value=3))
    states = tuple(f"q{i}" for i in range(n_live)) + ("qH",)
    halt = n_live
    sources = [(q, s) for q in range(n_live) for s in SYMBOLS]
    if kind == "qtm":
        chosen = sources
    else:
        chosen = draw(
            st.lists(st.sampled_from(sources), unique=True, max_size=len(sources))
        )
    triples = [
        (w, mv, nx)
        for w in SYMBOLS
        for mv in MOVES
        for nx in range(len(states))
    ]
    rows = []
    for source in chosen:
        if kind == "tm":
            picked = [draw(st.sampled_from(triples))]
            branches = [(w, mv, nx) for (w, mv, nx) in picked]
        else:
            picked = draw(
                st.lists(st.sampled_from(triples), unique=True, min_size=1, max_size=3)
            )
            if kind == "ptm":
                parts = draw(
                    st.lists(
                        st.integers(min_value=1, max_value=9),
                        min_size=len(picked),
                        max_size=len(picked),
                    )
                )
                total = sum(parts)
                branches = [
                    (w, mv, nx, Fraction(p, total))
                    for (w, mv, nx), p in zip(picked, parts)
                ]
            else:
                branches = [
                    (w, mv, nx, draw(nonzero_cyc)) for (w, mv, nx) in picked
                ]
        rows.append((source, branches))
    return make_machine(kind, "gen", states, halt, rows)
