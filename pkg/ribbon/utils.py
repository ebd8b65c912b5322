"""
Formatting and parsing helpers shared by the CLI and the corpus tools.
"""

import re
from typing import List, Sequence, Tuple

from ribbon.groups import GroupHom
from ribbon.laurent import FiniteLaurentModule, tau_invariants
from ribbon.pairing import FarberLevineStructure


def symmetric_residue(value: int, modulus: int) -> int:
    """Representative of value mod modulus in (-modulus/2, modulus/2]."""
    r = value % modulus
    return r - modulus if r > modulus // 2 else r


def format_hom(f: GroupHom) -> str:
    """A map of a cyclic group as a single integer, otherwise its matrix."""
    if f.source.ngens == 1 and f.target == f.source and f.source.torsion:
        return str(symmetric_residue(f.matrix[0, 0], f.source.torsion[0]))
    return str(f.matrix)


def format_module(module: FiniteLaurentModule) -> str:
    if module.group.is_trivial:
        return "Tor = 0"
    return f"Tor = {module.group}; τ = {format_hom(module.tau)}"


def format_structure(structure: FarberLevineStructure) -> str:
    """One-line summary, e.g. ``Tor = Z/3; τ = -1; λ(g,g) = 1/3``."""
    return f"{format_module(structure.module)}; {structure.pairing}"


def format_invariants(module: FiniteLaurentModule) -> List[str]:
    inv = tau_invariants(module)
    lines = [f"τ order: {inv.order}"]
    for p, coeffs in inv.layer_charpolys:
        lines.append(f"τ characteristic polynomial mod {p}: {format_poly(coeffs)}")
    return lines


def format_poly(coeffs: Sequence[int], var: str = "x") -> str:
    """Leading-first coefficients as a polynomial string."""
    degree = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        e = degree - i
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if mono and c == 1:
            parts.append(mono)
        elif mono:
            parts.append(f"{c}*{mono}")
        else:
            parts.append(str(c))
    return " + ".join(parts) if parts else "0"


def parse_int_list(text: str) -> Tuple[int, ...]:
    """Parse ``"1,-2,3"``; the empty string gives an empty tuple."""
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise ValueError(f"Expected comma-separated integers, got {text!r}") from e


def parse_character_spec(text: str) -> Tuple[int, Tuple[int, ...]]:
    """Parse ``"d:v1,v2,..."`` into the modulus and generator values."""
    modulus, sep, values = text.partition(":")
    if not sep:
        raise ValueError(f"Character must look like d:v1,v2,..., got {text!r}")
    try:
        d = int(modulus)
    except ValueError as e:
        raise ValueError(f"Character modulus {modulus!r} is not an integer") from e
    return d, parse_int_list(values)


def sanitize_filename(filename: str, replacement: str = "_") -> str:
    """
    Sanitize filename by removing/replacing invalid characters.

    Args:
        filename: Original filename
        replacement: Character to replace invalid chars with

    Returns:
        Sanitized filename
    """
    sanitized = re.sub(r'[<>:"/\\|?*\s]', replacement, filename)
    sanitized = sanitized.strip(". ")
    if not sanitized:
        sanitized = "unnamed"
    return sanitized[:255]
