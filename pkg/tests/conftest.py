import pytest

from filling.diagram import VanKampenDiagram
from filling.presentation import parse_presentation, triangularize


def z2():
    return parse_presentation("gens: a b\nrel: abAB\n")


def tri_z2():
    return triangularize(z2())


def grid_diagram(p, width, height):
    """Triangulated ``width x height`` rectangle of the Z^2 lattice, based at the origin.

    Vertex ``(x, y)`` is numbered ``x + (width + 1) * y``; ``t`` is the diagonal.
    """
    def v(x, y):
        return x + (width + 1) * y

    faces = []
    for y in range(height):
        for x in range(width):
            faces.append(((v(x + 1, y + 1), v(x + 1, y), v(x, y)), "BAt"))
            faces.append(((v(x, y), v(x, y + 1), v(x + 1, y + 1)), "baT"))
    return VanKampenDiagram.from_faces(p, faces, base=v(0, 0), first=(v(0, 0), v(1, 0)))


@pytest.fixture
def p():
    return tri_z2()


@pytest.fixture
def square(p):
    return grid_diagram(p, 1, 1)


@pytest.fixture
def triangle(p):
    return VanKampenDiagram.from_faces(p, [((2, 1, 0), "BAt")], base=0, first=(0, 1))


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
