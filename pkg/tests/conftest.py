import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from omegagames.words import LassoWord  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def lassos(alphabet, max_stem=4, max_period=4):
    letters = st.sampled_from(list(alphabet))
    return st.builds(LassoWord,
                     st.lists(letters, max_size=max_stem),
                     st.lists(letters, min_size=1, max_size=max_period))


def seeds():
    return st.integers(min_value=0, max_value=2 ** 32 - 1)
