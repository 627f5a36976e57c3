import pytest


def listing_source(count, counter="t", body=("// loop body",)):
    """The canonical countdown listing with a chosen bound."""
    lines = [f"10 {counter} := {count}", f"20 {counter} := {counter}-1"]
    number = 30
    for stmt in body:
        lines.append(f"{number} {stmt}")
        number += 10
    lines.append(f"{number} if {counter}>1 goto 20")
    lines.append(f"{number + 10} end")
    return "\n".join(lines) + "\n"


@pytest.fixture
def make_listing():
    return listing_source
