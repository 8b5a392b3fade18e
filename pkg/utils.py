"""
Utility functions for the metabelian-top analysis
Text grammars for words and polynomials, fixture loading and discovery
"""

import json
import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from artin import LabeledGraph
from errors import InputError
from freegroup import FreeWord
from laurent import LaurentPoly
from models import GraphFile, OneRelatorFile

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_WORD_TOKEN = re.compile(r"^([A-Za-z_]\w*)(?:\^(-?\d+))?$")
_POLY_TERM = re.compile(r"""
    \s*(?P<sign>[+-])?\s*
    (?P<coeff>\d+)?\s*
    (?P<mono>(?:\*?\s*[A-Za-z_]\w*(?:\s*\^\s*-?\d+)?\s*)*)
""", re.VERBOSE)
_POLY_FACTOR = re.compile(r"([A-Za-z_]\w*)(?:\s*\^\s*(-?\d+))?")


def parse_word(text: str, generators: Optional[Sequence[str]] = None) -> Tuple[FreeWord, List[str]]:
    """Parse `s1 s2^-1 s1^3`; names are indexed by the declared list or by first occurrence"""
    names = list(generators) if generators is not None else []
    index: Dict[str, int] = {name: i for i, name in enumerate(names)}
    syllables: List[Tuple[int, int]] = []
    for token in text.split():
        if token == "1":
            continue
        match = _WORD_TOKEN.match(token)
        if not match:
            raise InputError(f"malformed word token {token!r} in {text!r}")
        name, exp = match.group(1), int(match.group(2) or 1)
        if name not in index:
            if generators is not None:
                raise InputError(f"unknown generator {name!r}, expected one of {names}")
            index[name] = len(names)
            names.append(name)
        syllables.append((index[name], exp))
    return FreeWord(syllables), names


def render_word(word: FreeWord, names: Optional[Sequence[str]] = None) -> str:
    return word.format(names)


def parse_poly(text: str, variables: Sequence[str]) -> LaurentPoly:
    """Parse a signed sum of terms such as `1 - t + t^2` or `2*s*t^-1 - 3`"""
    variables = list(variables)
    rank = len(variables)
    position = {name: i for i, name in enumerate(variables)}
    source = text.strip()
    if not source:
        raise InputError("empty polynomial")
    terms: Dict[Tuple[int, ...], int] = {}
    pos = 0
    first = True
    while pos < len(source):
        match = _POLY_TERM.match(source, pos)
        sign, coeff, mono = match.group("sign"), match.group("coeff"), match.group("mono").strip()
        if match.end() == pos or (coeff is None and not mono):
            raise InputError(f"cannot parse polynomial {text!r} at position {pos}")
        if sign is None and not first:
            raise InputError(f"missing sign before term at position {pos} in {text!r}")
        exps = [0] * rank
        for name, exp in _POLY_FACTOR.findall(mono):
            if name not in position:
                raise InputError(f"unknown variable {name!r}, expected one of {variables}")
            exps[position[name]] += int(exp) if exp else 1
        value = int(coeff) if coeff is not None else 1
        if sign == "-":
            value = -value
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + value
        pos = match.end()
        first = False
    return LaurentPoly(rank, terms)


def render_poly(poly: LaurentPoly, variables: Optional[Sequence[str]] = None) -> str:
    return poly.format(variables)


def _describe_validation(error: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(part) for part in e['loc']) or 'file'}: {e['msg']}" for e in error.errors())


def _read_json(path: PathLike) -> object:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")


def load_graph(path: PathLike) -> LabeledGraph:
    """Read a graph file; the file stem names the graph when it has no name"""
    raw = _read_json(path)
    try:
        data = GraphFile.model_validate(raw)
    except ValidationError as e:
        raise InputError(f"{path}: {_describe_validation(e)}")
    if data.name is None:
        data.name = Path(path).stem
    logger.debug(f"loaded graph {data.name} with {len(data.vertices)} vertices from {path}")
    return LabeledGraph.from_file(data)


def load_one_relator(path: PathLike) -> OneRelatorFile:
    raw = _read_json(path)
    try:
        data = OneRelatorFile.model_validate(raw)
    except ValidationError as e:
        raise InputError(f"{path}: {_describe_validation(e)}")
    if data.name is None:
        data.name = Path(path).stem
    return data


def discover_fixtures(directory: PathLike) -> List[Path]:
    """All JSON files under a directory, sorted by path"""
    root = Path(directory)
    if not root.is_dir():
        raise InputError(f"not a directory: {root}")
    return sorted(root.rglob("*.json"))
