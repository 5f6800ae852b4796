"""Deterministic structured reports.

A report is a tree of dicts, lists, and scalars with a fixed key order.
The text rendering and the JSON rendering carry the same tree, so
fixtures can diff either form.
"""

from __future__ import annotations

import json

from .errors import PropEndsError

_SCALARS = (str, int, float, bool, type(None))


def _check(tree):
    if isinstance(tree, dict):
        for k, v in tree.items():
            if not isinstance(k, str):
                raise PropEndsError("report keys must be strings")
            _check(v)
    elif isinstance(tree, list):
        for v in tree:
            _check(v)
    elif not isinstance(tree, _SCALARS):
        raise PropEndsError(
            f"report values must be plain data, got {type(tree).__name__}"
        )


def render_json(tree) -> str:
    _check(tree)
    return json.dumps(tree, indent=2) + "\n"


def _render(tree, indent, lines):
    pad = "  " * indent
    if isinstance(tree, dict):
        if not tree:
            lines.append(f"{pad}(empty)")
            return
        for k, v in tree.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(tree, list):
        for v in tree:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(tree)}")


def _scalar(v):
    if isinstance(v, (dict, list)):
        return "(empty)"
    if v is None:
        return "~"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render_text(tree) -> str:
    _check(tree)
    lines = []
    _render(tree, 0, lines)
    return "\n".join(lines) + "\n"


def render(tree, fmt: str) -> str:
    if fmt == "json":
        return render_json(tree)
    if fmt == "text":
        return render_text(tree)
    raise PropEndsError(f"unknown report format {fmt!r}")
