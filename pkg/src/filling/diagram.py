"""Van Kampen diagrams as planar combinatorial maps.

Darts carry an origin vertex, a twin (the reversed dart) and a letter; the
twin carries the inverse letter.  ``rotation[v]`` lists the darts leaving
``v`` in cyclic order.  Faces are orbits of ``next(d) = rot_succ(twin(d))``;
one orbit is the outer face, stored as ``boundary`` starting at the base
point.  Diagrams need not be discs: spurs and cut vertices are allowed and
the boundary walk may traverse an edge twice.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .presentation import Presentation, parse_presentation, parse_word, read_presentation


class DiagramError(ValueError):
    """Invalid diagram data."""


class TwinError(DiagramError):
    pass


class RotationError(DiagramError):
    pass


class DisconnectedError(DiagramError):
    pass


class BoundaryError(DiagramError):
    pass


class BasePointError(DiagramError):
    pass


class FaceError(DiagramError):
    pass


class EulerError(DiagramError):
    pass


class FaceLabelError(DiagramError):
    pass


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset
    edges: frozenset  # edge id = min(dart, twin)
    faces: frozenset  # indices into diagram.faces


@dataclass(frozen=True)
class GeodesicTree:
    parent_dart: tuple  # dart from the parent to v, or -1 at the base point
    distance: tuple

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(d for d in self.parent_dart if d >= 0)


@dataclass(frozen=True)
class Curve:
    edges: tuple
    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Metrics:
    area: int
    diameter: int
    radius: int
    max_valence: int
    boundary_length: int


@dataclass(frozen=True, eq=False)
class VanKampenDiagram:
    presentation: Presentation
    n_vertices: int
    base: int
    origin: tuple
    twin: tuple
    label: tuple
    rotation: tuple  # per vertex, tuple of darts
    faces: tuple  # inner faces, each a tuple of darts in face order
    boundary: tuple  # outer face, starting at the base point

    # --- construction -------------------------------------------------

    @classmethod
    def trivial(cls, presentation: Presentation) -> "VanKampenDiagram":
        return cls(presentation, 1, 0, (), (), (), ((),), (), ())

    @classmethod
    def from_gluing(cls, presentation, label, twin, faces, boundary) -> "VanKampenDiagram":
        """Build from face cycles and a twin pairing; vertices are derived.

        The rotation successor of dart ``y`` is the face successor of
        ``twin(y)``; vertices are the rotation orbits.
        """
        n = len(label)
        if n == 0:
            return cls.trivial(presentation)
        face_next = [-1] * n
        for cyc in list(faces) + [boundary]:
            for i, d in enumerate(cyc):
                face_next[d] = cyc[(i + 1) % len(cyc)]
        rot_next = [face_next[twin[y]] for y in range(n)]
        origin = [-1] * n
        rotation = []
        # number vertices by first appearance along the boundary, then faces
        order = list(boundary) + [d for cyc in faces for d in cyc]
        for d0 in order:
            if origin[d0] >= 0:
                continue
            v = len(rotation)
            cyc = []
            d = d0
            while origin[d] < 0:
                origin[d] = v
                cyc.append(d)
                d = rot_next[d]
            rotation.append(tuple(cyc))
        return cls(presentation, len(rotation), origin[boundary[0]], tuple(origin),
                   tuple(twin), tuple(label), tuple(rotation),
                   tuple(tuple(f) for f in faces), tuple(boundary))

    @classmethod
    def from_faces(cls, presentation, faces, base, first=None) -> "VanKampenDiagram":
        """Build a disc diagram from faces given as ``(vertex cycle, word)``.

        Edge ``cycle[i] -> cycle[i+1]`` carries ``word[i]``.  Interior edges
        are matched with the reversed edge of another face; unmatched face
        edges get an outer twin.  Every boundary vertex must have a single
        outgoing outer dart.  ``first`` optionally names the first boundary
        edge as a vertex pair.
        """
        label, origin_v, face_cycles = [], [], []
        for cycle, word in faces:
            if isinstance(word, str):
                word = parse_word(word, presentation.generators)
            if len(cycle) != len(word):
                raise DiagramError("face cycle and word differ in length")
            cyc = []
            for i, x in enumerate(word):
                cyc.append(len(label))
                label.append(x)
                origin_v.append((cycle[i], cycle[(i + 1) % len(cycle)]))
            face_cycles.append(cyc)
        twin = [-1] * len(label)
        by_ends = {}
        for d, ends in enumerate(origin_v):
            by_ends.setdefault(ends, []).append(d)
        for d, (u, v) in enumerate(origin_v):
            if twin[d] >= 0:
                continue
            cands = [e for e in by_ends.get((v, u), []) if twin[e] < 0 and label[e] == label[d] ^ 1]
            if len(cands) > 1:
                raise DiagramError(f"ambiguous gluing of edge {u}->{v}")
            if cands:
                twin[d], twin[cands[0]] = cands[0], d
        outer = {}
        for d in range(len(twin)):
            if twin[d] < 0:
                u, v = origin_v[d]
                o = len(label)
                label.append(label[d] ^ 1)
                origin_v.append((v, u))
                twin.append(d)
                twin[d] = o
                if v in outer:
                    raise DiagramError(f"vertex {v} is a pinch point; give the map explicitly")
                outer[v] = o
        if not outer:
            raise DiagramError("no boundary")
        if first is not None:
            start = next(o for o in outer.values() if origin_v[o] == tuple(first))
        else:
            start = outer[base]
        boundary = [start]
        while True:
            nxt = outer[origin_v[boundary[-1]][1]]
            if nxt == start:
                break
            boundary.append(nxt)
        if len(boundary) != len(outer):
            raise DiagramError("boundary is not a single cycle")
        return cls.from_gluing(presentation, label, twin, face_cycles, boundary)

    # --- derived structure --------------------------------------------

    @property
    def n_darts(self) -> int:
        return len(self.origin)

    @property
    def n_edges(self) -> int:
        return len(self.origin) // 2

    @property
    def area(self) -> int:
        return len(self.faces)

    @property
    def boundary_word(self) -> tuple:
        return tuple(self.label[d] for d in self.boundary)

    def head(self, d: int) -> int:
        return self.origin[self.twin[d]]

    def edge(self, d: int) -> int:
        return min(d, self.twin[d])

    @cached_property
    def rot_next(self) -> tuple:
        nxt = [0] * self.n_darts
        for cyc in self.rotation:
            for i, d in enumerate(cyc):
                nxt[d] = cyc[(i + 1) % len(cyc)]
        return tuple(nxt)

    @cached_property
    def face_of(self) -> tuple:
        """Face index of each dart; -1 for the outer face."""
        f = [-1] * self.n_darts
        for i, cyc in enumerate(self.faces):
            for d in cyc:
                f[d] = i
        return tuple(f)

    def face_word(self, i: int) -> tuple:
        return tuple(self.label[d] for d in self.faces[i])

    def face_vertices(self, i: int) -> tuple:
        return tuple(self.origin[d] for d in self.faces[i])

    @cached_property
    def adjacency(self) -> tuple:
        return tuple(tuple(self.head(d) for d in cyc) for cyc in self.rotation)

    @cached_property
    def boundary_vertices(self) -> frozenset:
        return frozenset([self.base] + [self.origin[d] for d in self.boundary])

    @cached_property
    def boundary_edges(self) -> frozenset:
        return frozenset(self.edge(d) for d in self.boundary)

    # --- metrics --------------------------------------------------------

    def distances_from(self, sources) -> list:
        dist = [-1] * self.n_vertices
        queue = deque()
        for s in sources:
            if dist[s] < 0:
                dist[s] = 0
                queue.append(s)
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    @cached_property
    def base_distances(self) -> tuple:
        return tuple(self.distances_from([self.base]))

    @cached_property
    def boundary_distances(self) -> tuple:
        return tuple(self.distances_from(sorted(self.boundary_vertices)))

    @cached_property
    def metrics(self) -> Metrics:
        return Metrics(
            area=self.area,
            diameter=max(self.base_distances),
            radius=max(self.boundary_distances),
            max_valence=max(len(r) for r in self.rotation),
            boundary_length=len(self.boundary),
        )

    @property
    def diameter(self) -> int:
        return self.metrics.diameter

    def geodesic_spanning_tree(self) -> GeodesicTree:
        """Breadth-first tree from the base point.

        Darts are explored in rotation order, starting at the first boundary
        dart for the base point and at the first listed dart elsewhere.
        """
        parent = [-1] * self.n_vertices
        dist = [-1] * self.n_vertices
        dist[self.base] = 0
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            cyc = self.rotation[v]
            if v == self.base and self.boundary:
                k = cyc.index(self.boundary[0])
                cyc = cyc[k:] + cyc[:k]
            for d in cyc:
                u = self.head(d)
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    parent[u] = d
                    queue.append(u)
        return GeodesicTree(tuple(parent), tuple(dist))

    # --- subcomplexes ---------------------------------------------------

    def boundary_subcomplex(self) -> Subcomplex:
        return Subcomplex(self.boundary_vertices, self.boundary_edges, frozenset())

    def whole(self) -> Subcomplex:
        return Subcomplex(frozenset(range(self.n_vertices)),
                          frozenset(self.edge(d) for d in range(self.n_darts)),
                          frozenset(range(self.area)))

    def star(self, k: Subcomplex) -> Subcomplex:
        """``k`` together with every closed face meeting it."""
        verts, edges, faces = set(k.vertices), set(k.edges), set(k.faces)
        for i in range(self.area):
            if i in faces:
                continue
            if any(self.origin[d] in k.vertices for d in self.faces[i]):
                faces.add(i)
                for d in self.faces[i]:
                    verts.add(self.origin[d])
                    edges.add(self.edge(d))
        return Subcomplex(frozenset(verts), frozenset(edges), frozenset(faces))

    def star_i(self, k: Subcomplex, i: int) -> Subcomplex:
        for _ in range(i):
            nxt = self.star(k)
            if nxt == k:
                break
            k = nxt
        return k

    def boundary_curves(self, i: int) -> list:
        """Components of the frontier of ``star_i(boundary)`` away from the boundary.

        An edge belongs to the frontier when it lies in ``N_i`` but not on
        the boundary and borders a face outside ``N_i``.
        """
        n_i = self.star_i(self.boundary_subcomplex(), i)
        cut = set()
        for d in range(self.n_darts):
            e = self.edge(d)
            if e in n_i.edges and e not in self.boundary_edges:
                f = self.face_of[d]
                if f >= 0 and f not in n_i.faces:
                    cut.add(e)
        curves = []
        seen = set()
        for e in sorted(cut):
            if e in seen:
                continue
            comp, verts, stack = [], set(), [e]
            seen.add(e)
            while stack:
                x = stack.pop()
                comp.append(x)
                ends = (self.origin[x], self.head(x))
                verts.update(ends)
                for y in cut:
                    if y not in seen and (self.origin[y] in ends or self.head(y) in ends):
                        seen.add(y)
                        stack.append(y)
            curves.append(Curve(tuple(sorted(comp)), tuple(sorted(verts))))
        return curves

    # --- identity -------------------------------------------------------

    @cached_property
    def canonical_form(self) -> tuple:
        """Relabelling-invariant code of the map rooted at the first boundary dart."""
        if not self.boundary:
            return ()
        face_next = [0] * self.n_darts
        for cyc in list(self.faces) + [self.boundary]:
            for i, d in enumerate(cyc):
                face_next[d] = cyc[(i + 1) % len(cyc)]
        new = {self.boundary[0]: 0}
        order = [self.boundary[0]]
        k = 0
        while k < len(order):
            d = order[k]
            k += 1
            for e in (self.twin[d], face_next[d]):
                if e not in new:
                    new[e] = len(order)
                    order.append(e)
        return tuple((self.label[d], new[self.twin[d]], new[face_next[d]],
                      self.face_of[d] < 0) for d in order)

    def __eq__(self, other):
        if not isinstance(other, VanKampenDiagram):
            return NotImplemented
        return self.presentation == other.presentation and self.canonical_form == other.canonical_form

    def __hash__(self):
        return hash(self.canonical_form)

    def __repr__(self):
        w = self.presentation.render_word(self.boundary_word)
        return f"<VanKampenDiagram boundary={w!r} area={self.area} V={self.n_vertices}>"

    # --- interchange ----------------------------------------------------

    def to_dict(self, presentation_path: Optional[str] = None) -> dict:
        p = self.presentation
        out = {}
        if presentation_path is not None:
            out["presentation"] = presentation_path
        else:
            out["presentation_text"] = p.render()
        out.update({
            "vertices": list(range(self.n_vertices)),
            "base": self.base,
            "darts": [{"id": d, "origin": self.origin[d], "twin": self.twin[d],
                       "label": p.letter_name(self.label[d])} for d in range(self.n_darts)],
            "rotation": {str(v): list(r) for v, r in enumerate(self.rotation)},
            "faces": [list(f) for f in self.faces],
            "boundary": list(self.boundary),
        })
        return out

    def to_json(self, presentation_path: Optional[str] = None) -> str:
        return json.dumps(self.to_dict(presentation_path), indent=1)


def validate(raw: dict, presentation: Optional[Presentation] = None,
             base_dir: Optional[str] = None) -> VanKampenDiagram:
    """Check map data against every diagram invariant and return the diagram.

    Raises a specific ``DiagramError`` subclass for the first violation.
    """
    if presentation is None:
        if "presentation_text" in raw:
            presentation = parse_presentation(raw["presentation_text"])
        elif "presentation" in raw:
            path = raw["presentation"]
            if base_dir is not None and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            presentation = read_presentation(path)
        else:
            raise DiagramError("no presentation given")
    try:
        vertex_ids = list(raw["vertices"])
        darts = list(raw["darts"])
        rotation_raw = raw["rotation"]
        faces_raw = raw.get("faces", [])
        boundary_raw = raw.get("boundary", [])
        base_raw = raw["base"]
    except KeyError as exc:
        raise DiagramError(f"missing field {exc}") from None

    vidx = {v: i for i, v in enumerate(vertex_ids)}
    if len(vidx) != len(vertex_ids):
        raise DiagramError("duplicate vertex ids")
    didx = {}
    for i, rec in enumerate(darts):
        if rec["id"] in didx:
            raise DiagramError(f"duplicate dart id {rec['id']}")
        didx[rec["id"]] = i

    def dart(x):
        if x not in didx:
            raise DiagramError(f"unknown dart {x}")
        return didx[x]

    def vert(x):
        key = x if x in vidx else (int(x) if isinstance(x, str) and x.lstrip("-").isdigit() else x)
        if key not in vidx:
            raise DiagramError(f"unknown vertex {x}")
        return vidx[key]

    n = len(darts)
    origin = [vert(rec["origin"]) for rec in darts]
    twin = [dart(rec["twin"]) for rec in darts]
    label = []
    for rec in darts:
        w = parse_word(rec["label"], presentation.generators)
        if len(w) != 1:
            raise DiagramError(f"dart {rec['id']} label must be one letter")
        label.append(w[0])

    for d in range(n):
        t = twin[d]
        if t == d or twin[t] != d:
            raise TwinError(f"twin is not an involution at dart {darts[d]['id']}")
        if label[t] != label[d] ^ 1:
            raise TwinError(f"twin of dart {darts[d]['id']} does not carry the inverse letter")

    rotation = [None] * len(vertex_ids)
    for key, cyc in rotation_raw.items():
        v = vert(key)
        rotation[v] = tuple(dart(x) for x in cyc)
    rotation = [r if r is not None else () for r in rotation]
    seen = [0] * n
    for v, cyc in enumerate(rotation):
        for d in cyc:
            seen[d] += 1
            if origin[d] != v:
                raise RotationError(f"dart {darts[d]['id']} listed at the wrong vertex")
    if any(c != 1 for c in seen):
        raise RotationError("every dart must appear exactly once in the rotation")

    # connectivity
    if vertex_ids:
        reach = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for d in rotation[v]:
                u = origin[twin[d]]
                if u not in reach:
                    reach.add(u)
                    stack.append(u)
        if len(reach) != len(vertex_ids):
            raise DisconnectedError("1-skeleton is not connected")
    else:
        raise DisconnectedError("no vertices")

    rot_next = [0] * n
    for cyc in rotation:
        for i, d in enumerate(cyc):
            rot_next[d] = cyc[(i + 1) % len(cyc)]
    orbit_id = [-1] * n
    orbits = []
    for d0 in range(n):
        if orbit_id[d0] >= 0:
            continue
        cyc = []
        d = d0
        while orbit_id[d] < 0:
            orbit_id[d] = len(orbits)
            cyc.append(d)
            d = rot_next[twin[d]]
        orbits.append(cyc)

    def as_orbit(cyc, what, error):
        if not cyc:
            raise error(f"{what} is empty")
        k = orbit_id[cyc[0]]
        orb = orbits[k]
        i = orb.index(cyc[0])
        if list(cyc) != orb[i:] + orb[:i]:
            raise error(f"{what} is not a face cycle of the rotation system")
        return k

    boundary = [dart(x) for x in boundary_raw]
    faces = [[dart(x) for x in f] for f in faces_raw]
    base = vert(base_raw)
    used = set()
    if n == 0:
        if boundary or faces:
            raise BoundaryError("a diagram without edges has no boundary darts or faces")
        if len(vertex_ids) != 1:
            raise DisconnectedError("1-skeleton is not connected")
    else:
        used.add(as_orbit(boundary, "boundary", BoundaryError))
        if base not in {origin[d] for d in boundary}:
            raise BasePointError("base point is not on the boundary")
        if origin[boundary[0]] != base:
            raise BasePointError("boundary does not start at the base point")
        for i, f in enumerate(faces):
            k = as_orbit(f, f"face {i}", FaceError)
            if k in used:
                raise FaceError(f"face {i} repeats another face")
            used.add(k)
        if len(used) != len(orbits):
            raise FaceError("some face cycle is neither listed nor the boundary")

    chi = len(vertex_ids) - n // 2 + (len(faces) + 1)
    if chi != 2:
        raise EulerError(f"Euler characteristic is {chi}, expected 2")

    words = presentation.face_words()
    for i, f in enumerate(faces):
        w = tuple(label[d] for d in f)
        if w not in words:
            raise FaceLabelError(f"face {i} reads {presentation.render_word(w)!r}, "
                                 "not a cyclic permutation of a relator or its inverse")

    return VanKampenDiagram(presentation, len(vertex_ids), base, tuple(origin), tuple(twin),
                            tuple(label), tuple(rotation), tuple(tuple(f) for f in faces),
                            tuple(boundary))


def load_diagram(path, presentation: Optional[Presentation] = None) -> VanKampenDiagram:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return validate(raw, presentation, base_dir=os.path.dirname(os.path.abspath(path)))


def revalidate(d: VanKampenDiagram) -> VanKampenDiagram:
    return validate(d.to_dict(), d.presentation)
