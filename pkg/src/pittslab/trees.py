"""Textual serialization of proof trees.

S-expression format, one node per parenthesized group:

    (<rule> "<sequent>" ["<extra>"] <child>*)

The extra string is positional: the cut formula for `cut`, the witness for
`exR` / `allL`, and `<name> {X := ...}` for `schema`.
"""
from __future__ import annotations

import re

from .kernel import ProofTree
from .parser import Parser
from .scripts import MalformedScript, _parse_bindings
from .syntax import Formula, Signature

_TOKEN = re.compile(r'\s*(\(|\)|"(?:[^"\\]|\\.)*"|[^\s()"]+)')


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedScript(f"bad tree syntax at offset {pos}")
        tok = m.group(1)
        pos = m.end()
        out.append(tok)
    return out


def _read(tokens: list[str], i: int, parser: Parser):
    if tokens[i] != "(":
        raise MalformedScript(f"expected '(' at token {i}")
    i += 1
    rule = tokens[i]
    i += 1
    if not (tokens[i].startswith('"') and tokens[i].endswith('"')):
        raise MalformedScript(f"expected quoted sequent after rule {rule!r}")
    seq = parser.parse_sequent(tokens[i][1:-1])
    i += 1
    data = None
    if rule in ("cut", "exR", "allL", "schema") and i < len(tokens) and tokens[i].startswith('"'):
        raw = tokens[i][1:-1]
        i += 1
        if rule == "schema":
            name, _, brace = raw.partition(" ")
            data = (name, dict(_parse_bindings(brace or "{}", parser)))
        else:
            data = parser.parse(raw)
    children = []
    while tokens[i] != ")":
        child, i = _read(tokens, i, parser)
        children.append(child)
    return ProofTree(rule, seq, tuple(children), data), i + 1


def parse_tree(text: str, signature: Signature | None = None) -> ProofTree:
    parser = Parser(signature or Signature())
    tokens = _tokens(text)
    tree, end = _read(tokens, 0, parser)
    if end != len(tokens):
        raise MalformedScript("trailing input after tree")
    return tree


def print_tree(tree: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    parts = [f'{pad}({tree.rule} "{tree.conclusion}"']
    if isinstance(tree.data, Formula):
        parts[0] += f' "{tree.data}"'
    elif isinstance(tree.data, tuple) and tree.rule == "schema":
        name, bindings = tree.data
        inner = ", ".join(f"{v.name} := {f}" for v, f in sorted(bindings.items()))
        parts[0] += f' "{name} {{{inner}}}"'
    if not tree.premises:
        return parts[0] + ")"
    for child in tree.premises:
        parts.append(print_tree(child, indent + 1))
    return "\n".join(parts) + ")"
