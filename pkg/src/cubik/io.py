"""JSON loading and canonical dumping for every input kind."""
import json

from .errors import InvalidInput
from .median import MedianGraph
from .npc import SquareComplex
from .pocset import Pocset, parse_token
from .wallspace import Wallspace


def dumps(obj):
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def detect_kind(data):
    if not isinstance(data, dict):
        raise InvalidInput("top-level JSON value must be an object")
    if "n_walls" in data:
        return "pocset"
    if "ground_size" in data:
        return "wallspace"
    if "squares" in data or "vertices" in data:
        return "square_complex"
    if "n_vertices" in data:
        return "graph"
    raise InvalidInput("cannot tell what kind of object this JSON describes")


def _wrap(kind, fn, data):
    try:
        return fn(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed {kind}: {exc!r}") from exc


def load_pocset(data, validate=True):
    return _wrap("pocset", lambda d: Pocset.from_json(d, validate=validate), data)


def load_graph(data):
    return _wrap("graph", MedianGraph.from_json, data)


def load_wallspace(data):
    return _wrap("wallspace", Wallspace.from_json, data)


def load_square_complex(data):
    return _wrap("square complex", SquareComplex.from_json, data)


def parse_halfspace(text):
    """``"3+"`` -> oriented wall index ``6``."""
    try:
        return parse_token(text)
    except Exception as exc:
        raise InvalidInput(f"bad halfspace {text!r}; expected WALL+ or WALL-") from exc


def halfspace_from_json(obj):
    if isinstance(obj, str):
        return parse_halfspace(obj)
    return 2 * int(obj["wall"]) + (obj.get("side", "+") == "-")
