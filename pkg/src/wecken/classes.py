"""Membership tests for the classes of endomorphisms known to be Wecken.

Everything here is a *sufficient* condition; none of these predicates
decides the Wecken property itself.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

from .freegroup import Word, maximal_common_initial
from .wagner import Endomorphism, has_remnant, iter_tails

__all__ = [
    "ImageWordShape",
    "ClassFlags",
    "is_vn",
    "is_vn_strict",
    "is_vn_cross",
    "t_structure",
    "classify_t",
    "t4_common_prefix",
    "image_word_shape",
    "is_v_nontrivial",
    "is_w_nontrivial",
    "is_kn",
    "is_ln",
    "is_rn",
    "class_flags",
    "T_CLASSES",
    "ln_ordering",
    "swap_ab",
]

T_CLASSES = ("T2a", "T2b", "T2b'", "T4", "T4'")


# ----------------------------------------------------------------------- V_n

def _raw_images(phi) -> Sequence[tuple[int, ...]]:
    return phi.images if isinstance(phi, Endomorphism) else phi


def is_vn_cross(phi) -> bool:
    """No tail equals 1 and no two distinct fixed points share a tail.

    This is the "no direct relations" reading: ``w`` and ``w_bar`` of a
    single fixed point may coincide.  Accepts an :class:`Endomorphism` or a
    sequence of raw letter tuples.
    """
    owner: dict[tuple, int] = {}
    for fp, (_, _, _, w, w_bar) in enumerate(iter_tails(_raw_images(phi))):
        if not w or not w_bar:
            return False
        if owner.setdefault(w, fp) != fp:
            return False
        if owner.setdefault(w_bar, fp) != fp:
            return False
    return True


def is_vn_strict(phi) -> bool:
    """All non-wedge tails pairwise distinct as a list, and none equal to 1."""
    seen: set[tuple] = set()
    for _, _, _, w, w_bar in iter_tails(_raw_images(phi)):
        if not w or not w_bar or w == w_bar or w in seen or w_bar in seen:
            return False
        seen.add(w)
        seen.add(w_bar)
    return True


def is_vn(phi, strict: bool = False) -> bool:
    """Whether the Wagner tails of ``phi`` are all different.

    The default reading forbids shared tails between different fixed points
    (and tails equal to the wedge tail 1); ``strict=True`` additionally
    forbids ``w == w_bar`` at a single fixed point.
    """
    return is_vn_strict(phi) if strict else is_vn_cross(phi)


def is_rn(phi: Endomorphism) -> bool:
    return has_remnant(phi)


# ------------------------------------------------------------ rank-2 classes

def _ends(w: Word) -> tuple[int, int]:
    # s = first letter, l = inverse of the last letter
    return w[0], -w[-1]


def t4_common_prefix(x: Word, y: Word) -> Word:
    """Maximal ``U`` with ``x = U X1`` and ``y = X2 U^-1`` (possibly trivial)."""
    y_inv = Word._trusted(tuple(-c for c in reversed(y)))
    if x == y_inv:
        return x
    return maximal_common_initial(x, y_inv)


def t_structure(phi: Endomorphism) -> set[str]:
    """Structural T-class conditions on a rank-2 map, without remnant."""
    if phi.rank != 2:
        raise ValueError("T-classes are defined for rank 2 only")
    fa, fb = phi.images
    if not fa or not fb:
        return set()
    sa, la = _ends(fa)
    sb, lb = _ends(fb)
    found = set()
    if len({sa, la, sb, lb}) == 4:
        found.add("T2a")
    # phi(a) = U X U^-1 with U nontrivial  <=>  s_a == l_a
    if sa == la and sb != lb and sa not in (sb, lb):
        found.add("T2b")
    if sb == lb and sa != la and sb not in (sa, la):
        found.add("T2b'")
    # phi(a) = U X1, phi(b) = X2 U^-1 with U nontrivial  <=>  s_a == l_b
    if sa == lb and sa != la and sb != lb and la != sb:
        found.add("T4")
    if sb == la and sb != lb and sa != la and lb != sa:
        found.add("T4'")
    return found


def classify_t(phi: Endomorphism) -> set[str]:
    """T-classes of a rank-2 map; each class requires remnant."""
    found = t_structure(phi)
    if found and not has_remnant(phi):
        return set()
    return found


# ------------------------------------------------------ image word shapes

@dataclass(frozen=True)
class ImageWordShape:
    type: str  # "T0", "T1a", "T1b", "T2" or "other"
    s: Word | None = None
    l: Word | None = None
    m: Word | None = None

    @property
    def x(self) -> int | None:
        return None if self.s is None else len(self.s)

    @property
    def y(self) -> int | None:
        return None if self.l is None else len(self.l)


_OTHER = ImageWordShape("other")


def _shape(w: Sequence[int], k: int) -> ImageWordShape:
    occ = [j for j, c in enumerate(w) if c == k or c == -k]
    if len(occ) < 2:
        return _OTHER
    first, last = occ[0], occ[-1]
    m = Word._trusted(tuple(w[first + 1:last]))
    if first == 0:
        if w[0] != -k:
            return _OTHER  # starts with a_k: trivial w
        s = Word._trusted((-k,))
        starts_inverse = True
    else:
        s = Word._trusted(tuple(w[:first]))
        starts_inverse = False
    if last == len(w) - 1:
        if w[-1] != -k:
            return _OTHER  # ends with a_k: trivial w_bar
        l = Word._trusted((k,))
        ends_inverse = True
    else:
        l = Word._trusted(tuple(-c for c in reversed(w[last + 1:])))
        ends_inverse = False
    kind = {
        (False, False): "T0",
        (True, False): "T1a",
        (False, True): "T1b",
        (True, True): "T2",
    }[starts_inverse, ends_inverse]
    return ImageWordShape(kind, s, l, m)


def image_word_shape(phi: Endomorphism, i: int) -> ImageWordShape:
    """Decompose ``phi(a_i)`` around its first and last ``a_i^{+-1}``."""
    if not 1 <= i <= phi.rank:
        raise IndexError(f"generator {i} out of range")
    return _shape(phi.images[i - 1], i)


def is_v_nontrivial(phi: Endomorphism) -> bool:
    return all(_shape(w, k).type == "T0" for k, w in enumerate(phi.images, start=1))


def is_w_nontrivial(phi: Endomorphism) -> bool:
    return all(w and wb for _, _, _, w, wb in iter_tails(phi.images))


# ------------------------------------------------------------------ K_n, L_n

def _initial(v: Sequence[int], k: int):
    # length-matched initial subview; None when v is too short (never equal)
    return tuple(v[:k]) if k <= len(v) else None


def _terminal_inverse(v: Sequence[int], k: int):
    return tuple(-c for c in reversed(v[len(v) - k:])) if k <= len(v) else None


def is_kn(phi: Endomorphism) -> bool:
    """All images Type 0 plus the prefix/suffix inequalities, in index order."""
    images = phi.images
    shapes = []
    for k, w in enumerate(images, start=1):
        sh = _shape(w, k)
        if sh.type != "T0":
            return False
        shapes.append(sh)
    for k, (w, sh) in enumerate(zip(images, shapes)):
        s, l = tuple(sh.s), tuple(sh.l)
        x, y = len(s), len(l)
        if l == _initial(w, y):
            return False
        for prev in images[:k]:
            if s in (_initial(prev, x), _terminal_inverse(prev, x)):
                return False
            if l in (_initial(prev, y), _terminal_inverse(prev, y)):
                return False
    return True


def ln_ordering(phi: Endomorphism) -> list[tuple[int, int]] | None:
    """Canonical ordering ``[(generator, +-1), ...]`` of the images and inverses.

    Type 2 pairs first, then Type 1 positives, Type 1 negatives, then Type 0
    pairs; generator order within each group.  ``None`` if some image has
    no type.
    """
    groups: dict[str, list[int]] = {"T2": [], "T1": [], "T0": []}
    for k, w in enumerate(phi.images, start=1):
        t = _shape(w, k).type
        if t == "other":
            return None
        groups["T1" if t in ("T1a", "T1b") else t].append(k)
    order = [(k, e) for k in groups["T2"] for e in (1, -1)]
    order += [(k, 1) for k in groups["T1"]] + [(k, -1) for k in groups["T1"]]
    order += [(k, e) for k in groups["T0"] for e in (1, -1)]
    return order


def is_ln(phi: Endomorphism) -> bool:
    if not is_w_nontrivial(phi):
        return False
    order = ln_ordering(phi)
    if order is None:
        return False
    images = phi.images
    shapes = {k: _shape(images[k - 1], k) for k, _ in order}
    words = {}
    for k, e in order:
        w = images[k - 1]
        words[k, e] = tuple(w) if e == 1 else tuple(-c for c in reversed(w))
    for pos, (k, e) in enumerate(order):
        gov = tuple(shapes[k].s) if e == 1 else tuple(shapes[k].l)
        for prev in order[:pos]:
            if gov == _initial(words[prev], len(gov)):
                return False
    return True


# -------------------------------------------------------------------- flags

@dataclass(frozen=True)
class ClassFlags:
    remnant: bool
    vn: bool
    vnStrict: bool
    t2a: bool
    t2b: bool
    t2bPrime: bool
    t4: bool
    t4Prime: bool
    vNontrivial: bool
    wNontrivial: bool
    kn: bool
    ln: bool

    def as_dict(self) -> dict[str, bool]:
        return asdict(self)


def class_flags(phi: Endomorphism) -> ClassFlags:
    t = classify_t(phi) if phi.rank == 2 else set()
    return ClassFlags(
        remnant=has_remnant(phi),
        vn=is_vn(phi),
        vnStrict=is_vn_strict(phi),
        t2a="T2a" in t,
        t2b="T2b" in t,
        t2bPrime="T2b'" in t,
        t4="T4" in t,
        t4Prime="T4'" in t,
        vNontrivial=is_v_nontrivial(phi),
        wNontrivial=is_w_nontrivial(phi),
        kn=is_kn(phi),
        ln=is_ln(phi),
    )


def swap_ab(phi: Endomorphism) -> Endomorphism:
    """Exchange the roles of the two generators of a rank-2 map."""
    return phi.relabel((2, 1))

