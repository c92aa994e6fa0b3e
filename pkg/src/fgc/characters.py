"""Complex character tables: validation, JSON ingestion and computation from a group.

Tables are computed by the class-algebra method.  With a_{ijk} the number
of x in C_i with x^{-1} z_k in C_j (z_k a fixed element of C_k), the vector
omega_chi(C) = |C| chi(C) / chi(1) is a common right eigenvector of the
matrices (M_i)_{jk} = a_{ijk}.  A random integer combination of the M_i
separates all eigenvectors; degrees then follow from column orthogonality.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
from mpmath import mpc, mpf

from .errors import CapExceeded, EigenFailure, OrthogonalityViolation, ParseError, SizeMismatch
from .groups import ExplicitGroup

DEFAULT_DIGITS = 50
GROUP_CAP = 10**5
CLASS_CAP = 300


@dataclass(frozen=True)
class ClassInfo:
    label: str
    size: int
    element_order: int


@dataclass
class CharacterTable:
    group_order: int
    classes: list[ClassInfo]
    values: list[list[mpc]]  # values[chi][class]
    precision_digits: int = DEFAULT_DIGITS
    class_det: list[int] | None = None  # det exponent per class, GL_n(q) only
    det_modulus: int | None = None

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def degrees(self) -> list[int]:
        return [int(mpmath.nint(row[0].real)) for row in self.values]

    def tolerance(self):
        return mpf(10) ** (-(self.precision_digits * 2) // 5) * self.group_order

    def validate(self) -> None:
        sizes = [c.size for c in self.classes]
        if sum(sizes) != self.group_order:
            raise SizeMismatch(f"class sizes sum to {sum(sizes)}, group order {self.group_order}")
        if not self.classes or sizes[0] != 1:
            raise SizeMismatch("column 0 must be the identity class (size 1)")
        if len(self.values) != len(self.classes) or any(len(r) != len(self.classes) for r in self.values):
            raise SizeMismatch("character table must be square (characters = classes)")
        tol = self.tolerance()
        with mpmath.workdps(self.precision_digits + 10):
            if any(abs(v - 1) > tol for v in self.values[0]):
                raise OrthogonalityViolation("row 0 must be the trivial character")
            for i, chi in enumerate(self.values):
                d = chi[0]
                if abs(d.imag) > tol or abs(d.real - mpmath.nint(d.real)) > tol or d.real < 0.5:
                    raise OrthogonalityViolation(f"character {i} has non-integral degree {mpmath.nstr(d, 10)}")
                for j in range(i, len(self.values)):
                    psi = self.values[j]
                    s = sum(c * x * mpmath.conj(y) for c, x, y in zip(sizes, chi, psi))
                    target = self.group_order if i == j else 0
                    if abs(s - target) > tol:
                        raise OrthogonalityViolation(
                            f"rows {i},{j}: inner product {mpmath.nstr(s, 12)} != {target}")

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "group_order": str(self.group_order),
            "classes": [{"label": c.label, "size": str(c.size), "element_order": c.element_order}
                        for c in self.classes],
            "characters": [[{"re": mpmath.nstr(v.real, self.precision_digits),
                             "im": mpmath.nstr(v.imag, self.precision_digits)} for v in row]
                           for row in self.values],
            "precision_digits": self.precision_digits,
        }
        if self.class_det is not None:
            out["class_det"] = list(self.class_det)
            out["det_modulus"] = self.det_modulus
        return out

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))


def table_from_json(data: dict) -> CharacterTable:
    try:
        digits = int(data.get("precision_digits", DEFAULT_DIGITS))
        with mpmath.workdps(digits + 10):
            classes = [ClassInfo(str(c["label"]), int(c["size"]), int(c["element_order"]))
                       for c in data["classes"]]
            values = [[mpc(mpf(v["re"]), mpf(v.get("im", "0"))) for v in row] for row in data["characters"]]
        table = CharacterTable(int(data["group_order"]), classes, values, digits,
                               data.get("class_det"), data.get("det_modulus"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed character table: {exc}") from exc
    table.validate()
    return table


def load_character_table(path) -> CharacterTable:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return table_from_json(data)


# ------------------------------------------------------------- computation


def class_structure_constants(G: ExplicitGroup) -> list[list[list[int]]]:
    """a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j} for z_k the first element of C_k."""
    classes = G.classes
    cls = G.class_of()
    h = len(classes)
    a = [[[0] * h for _ in range(h)] for _ in range(h)]
    for k, ck in enumerate(classes):
        z = ck[0]
        for i, ci in enumerate(classes):
            targets = cls[G.table[G.inverse[ci], z]]
            for j in targets:
                a[i][int(j)][k] += 1
    return a


def compute_character_table(G: ExplicitGroup, precision_digits: int = DEFAULT_DIGITS,
                            cap: int = GROUP_CAP, class_cap: int = CLASS_CAP, seed: int = 0) -> CharacterTable:
    if G.order > cap:
        raise CapExceeded(f"|G| = {G.order} exceeds cap {cap}")
    classes = G.classes
    h = len(classes)
    if h > class_cap:
        raise CapExceeded(f"{h} classes exceed cap {class_cap}")
    sizes = [len(c) for c in classes]
    orders = G.element_orders
    info = [ClassInfo(f"C{k}", sizes[k], int(orders[c[0]])) for k, c in enumerate(classes)]
    a = class_structure_constants(G)
    rng = random.Random(seed)
    digits = precision_digits + 20
    with mpmath.workdps(digits):
        for attempt in range(8):
            coeffs = [rng.randint(1, 1000) for _ in range(h)]
            M = mpmath.matrix(h, h)
            for i in range(h):
                for j in range(h):
                    for k in range(h):
                        if a[i][j][k]:
                            M[j, k] += coeffs[i] * a[i][j][k]
            try:
                evals, evecs = mpmath.eig(M)
            except Exception as exc:  # mpmath raises plain errors on non-convergence
                raise EigenFailure(f"eigen-decomposition failed: {exc}", matrix_index=attempt) from exc
            gap = min((abs(evals[s] - evals[t]) for s in range(h) for t in range(s)), default=mpf(1))
            if gap > mpf(10) ** (-digits // 3):
                break
        else:
            raise EigenFailure("could not separate eigenvalues with random combinations", matrix_index=attempt)
        rows = []
        for s in range(h):
            w = [evecs[j, s] for j in range(h)]
            if abs(w[0]) < mpf(10) ** (-digits // 2):
                raise EigenFailure("eigenvector vanishes at the identity class", matrix_index=s)
            w = [x / w[0] for x in w]
            norm = sum(abs(x) ** 2 / c for x, c in zip(w, sizes))
            deg = mpmath.sqrt(G.order / norm)
            rows.append([x * deg / c for x, c in zip(w, sizes)])
        rows.sort(key=lambda r: (mpmath.nint(r[0].real), -sum(x.real for x in r)))
        values = [[mpc(x) for x in r] for r in rows]
    class_det = None
    if G.det is not None:
        class_det = [int(G.det[c[0]]) for c in classes]
    table = CharacterTable(G.order, info, values, precision_digits, class_det, G.det_modulus)
    table.validate()
    return table
