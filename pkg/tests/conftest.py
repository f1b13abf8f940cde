import numpy as np
import pytest

from augbench import kernels
from augbench.resources import EmbeddingStore, synonym_map_from_dict


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted kernels once so individual tests time only the work
    kernels.warmup()


@pytest.fixture
def synmap():
    return synonym_map_from_dict({
        "bom": ["otimo"],
        "otimo": ["bom", "excelente"],
        "carro": ["automovel", "veiculo"],
        "produto": ["item"],
    })


@pytest.fixture
def tiny_store():
    words = ("a", "b", "c")
    matrix = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    return EmbeddingStore(dim=2, words=words, matrix=matrix)


def write_csv(path, rows, header="text,label"):
    lines = [header] + rows
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
