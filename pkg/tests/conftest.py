import hypothesis.strategies as st
from hypothesis import settings

from lgtableau.syntax import CONNECTIVES, Atom, Binary, Sign

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ATOM_NAMES = ("p", "q", "r", "np", "s")


def formulas(max_leaves=5, atoms=ATOM_NAMES, connectives=CONNECTIVES):
    return st.recursive(
        st.sampled_from(atoms).map(Atom),
        lambda sub: st.builds(Binary, st.sampled_from(connectives), sub, sub),
        max_leaves=max_leaves,
    )


signs = st.sampled_from(list(Sign))
