from __future__ import annotations

from pathlib import Path

import pytest

from codegraph.fqlinalg import Subspace, parse_subspace

FIXTURES = Path(__file__).parent / "fixtures"


def load_sections(name: str) -> dict[str, list[Subspace]]:
    """Parse a fixture of digit-matrix blocks grouped under [section] headers."""
    sections: dict[str, list[Subspace]] = {}
    current: str | None = None
    block: list[str] = []

    def flush() -> None:
        if current is not None and block:
            sections[current].append(parse_subspace("\n".join(block)))
        block.clear()

    for line in (FIXTURES / name).read_text().splitlines():
        line = line.strip()
        if line.startswith("["):
            flush()
            current = line.strip("[]")
            sections[current] = []
        elif line:
            block.append(line)
        else:
            flush()
    flush()
    return sections


@pytest.fixture(scope="session")
def example1_classes() -> dict[str, list[Subspace]]:
    return load_sections("example1_classes.txt")


@pytest.fixture(scope="session")
def example2_complements() -> dict[str, list[Subspace]]:
    return load_sections("example2_complements.txt")


@pytest.fixture(scope="session")
def ctx4():
    """The n=4 theorem context with group tables, built once per session."""
    from codegraph.verify import build_context

    return build_context(4)


@pytest.fixture(scope="session")
def certificate4(ctx4):
    """The exhaustive n=4 certificate, computed once and shared."""
    from codegraph.verify import certify_theorem

    return certify_theorem(4)
