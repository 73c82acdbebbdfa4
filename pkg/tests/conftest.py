import numpy as np
import pytest

from typilog.activations import Logistic
from typilog.degrees import GOEDEL, GradedScale
from typilog.interpretation import Interpretation
from typilog.network import Edge, Network, Unit
from typilog.syntax import parse_kb
from typilog.weighted_kb import WeightedKb


@pytest.fixture
def tall_interpretation():
    """Bob has parents Mary (0.5 tall) and Tom (0.9 tall); Bob is 0.8 tall."""
    has_parent = np.zeros((3, 3))
    has_parent[0, 1] = 1.0  # bob -> mary
    has_parent[0, 2] = 1.0  # bob -> tom
    return Interpretation(
        domain=("bob", "mary", "tom"),
        concepts={"Tall": np.array([0.8, 0.5, 0.9])},
        roles={"hasParent": has_parent},
        individuals={"bob": 0, "mary": 1, "tom": 2},
        family=GOEDEL)


PENGUIN_KB = """
# strict color disjointness
Yellow and Black <: bot >= 1
Yellow and Red <: bot >= 1
Black and Red <: bot >= 1

Red(reddy) >= 1
(some hasWings . Small)(reddy) >= 1
Fly(reddy) >= 1
Black(opus) >= 0.8
(some hasWings . Long)(opus) >= 1
Fly(opus) <= 0

Bird {
  T(Bird) <: Fly @ 20
  T(Bird) <: some hasWings . top @ 50
  T(Bird) <: some hasFeathering . top @ 50
}
Penguin {
  T(Penguin) <: Bird @ 100
  T(Penguin) <: Fly @ -70
  T(Penguin) <: Black @ 50
}
Canary {
  T(Canary) <: Bird @ 100
  T(Canary) <: Yellow @ 30
  T(Canary) <: Red @ 20
}
"""


@pytest.fixture
def penguin_kb():
    return WeightedKb.from_document(parse_kb(PENGUIN_KB))


def make_penguin_interpretation(penguin_reddy: float = 0.2) -> Interpretation:
    """Reddy the red flying bird and Opus the black non-flying penguin,
    plus one wing/feather witness each."""
    domain = ("reddy", "opus", "w1", "w2")
    z = np.zeros((4, 4))
    has_wings = z.copy()
    has_wings[0, 2] = 1.0
    has_wings[1, 3] = 1.0
    has_feathering = z.copy()
    has_feathering[0, 2] = 1.0
    has_feathering[1, 3] = 1.0
    return Interpretation(
        domain=domain,
        concepts={
            "Bird": np.array([1.0, 0.8, 0.0, 0.0]),
            "Penguin": np.array([penguin_reddy, 0.8, 0.0, 0.0]),
            "Canary": np.zeros(4),
            "Fly": np.array([1.0, 0.0, 0.0, 0.0]),
            "Red": np.array([1.0, 0.0, 0.0, 0.0]),
            "Black": np.array([0.0, 0.8, 0.0, 0.0]),
            "Yellow": np.zeros(4),
            "Small": np.array([0.0, 0.0, 1.0, 0.0]),
            "Long": np.array([0.0, 0.0, 0.0, 1.0]),
        },
        roles={"hasWings": has_wings, "hasFeathering": has_feathering},
        individuals={"reddy": 0, "opus": 1},
        family=GOEDEL)


@pytest.fixture
def penguin_interpretation():
    return make_penguin_interpretation()


def make_demo_network() -> Network:
    """One logistic unit over two inputs with weights (1, -1) and zero bias."""
    return Network(
        units=[Unit("j1", name="C_j1"), Unit("j2", name="C_j2"),
               Unit("k", activation=Logistic(), name="C_k")],
        edges=[Edge("j1", "k", 1.0), Edge("j2", "k", -1.0)],
        inputs=["j1", "j2"])


@pytest.fixture
def demo_network():
    return make_demo_network()


@pytest.fixture
def scale5():
    return GradedScale(5)
