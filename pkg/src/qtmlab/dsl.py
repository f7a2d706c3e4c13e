"""Line-oriented text format for machine descriptions.

    # a 2-state machine writing 1 then halting
    kind tm
    name tiny
    states q0 qH
    halt qH
    rule q0 _ -> (qH, 1, S)

Four header lines (kind, name, states, halt) come first, then one `rule`
line per source.  QTM and PTM branches carry a fourth field, a weight in
the amplitude grammar, and several branches are joined with `+`.  `#`
starts a comment.  The serializer emits a canonical form: headers in the
order above, rows sorted by (state index, symbol), branches sorted by
(write, move, next), weights in canonical amplitude notation.  Parsing a
canonical serialization reproduces the machine exactly, which is what
makes the byte-level machine numbering injective.
"""

from __future__ import annotations

from .errors import MachineSyntaxError
from .exact import format_amp, parse_amp
from .machines import KINDS, MOVES, SYMBOLS, MachineDesc, make_machine

_HEADERS = ("kind", "name", "states", "halt")


def parse_machine(text: str) -> MachineDesc:
    """Parse and validate; raises MachineSyntaxError or StructureError."""
    headers = {}
    rows = []
    states = None
    index = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        cut = raw.find("#")
        line = (raw if cut < 0 else raw[:cut]).strip()
        if not line:
            continue
        word = line.split(None, 1)[0]
        if word in _HEADERS:
            if rows:
                raise MachineSyntaxError("headers must precede rules", line=lineno)
            if word in headers:
                raise MachineSyntaxError(f"duplicate header {word!r}", line=lineno)
            headers[word] = (line[len(word):].strip(), lineno)
        elif word == "rule":
            if states is None:
                for h in _HEADERS:
                    if h not in headers:
                        raise MachineSyntaxError(
                            f"missing header {h!r} before first rule", line=lineno
                        )
                if headers["kind"][0] not in KINDS:
                    raise MachineSyntaxError(
                        f"unknown kind {headers['kind'][0]!r}", line=headers["kind"][1]
                    )
                states = tuple(headers["states"][0].split())
                index = {name: i for i, name in enumerate(states)}
            rows.append(_parse_rule(line, lineno, headers["kind"][0], index))
        else:
            raise MachineSyntaxError(f"unrecognized line {word!r}", line=lineno)

    for h in _HEADERS:
        if h not in headers:
            raise MachineSyntaxError(f"missing header {h!r}")
    if states is None:
        states = tuple(headers["states"][0].split())
        index = {name: i for i, name in enumerate(states)}

    kind = headers["kind"][0]
    if kind not in KINDS:
        raise MachineSyntaxError(
            f"unknown kind {kind!r}", line=headers["kind"][1]
        )
    halt_name, halt_line = headers["halt"]
    if halt_name not in index:
        raise MachineSyntaxError(f"undeclared halt state {halt_name!r}", line=halt_line)

    seen = set()
    for source, _branches, lineno in rows:
        if source in seen:
            raise MachineSyntaxError("duplicate rule source", line=lineno)
        seen.add(source)

    return make_machine(
        kind,
        headers["name"][0],
        states,
        index[halt_name],
        [(source, branches) for source, branches, _ in rows],
    )


def _parse_rule(line, lineno, kind, index):
    head, sep, rest = line.partition("->")
    if not sep:
        raise MachineSyntaxError("rule line needs '->'", line=lineno)
    fields = head.split()
    if len(fields) != 3:
        raise MachineSyntaxError(
            "rule line needs a source state and a source symbol", line=lineno
        )
    _, state_name, sym = fields
    if state_name not in index:
        raise MachineSyntaxError(f"undeclared state {state_name!r}", line=lineno)
    if sym not in SYMBOLS:
        raise MachineSyntaxError(f"bad source symbol {sym!r}", line=lineno)
    branches = _parse_branches(rest, lineno, kind, index)
    return ((index[state_name], sym), branches, lineno)


def _parse_branches(text, lineno, kind, index):
    branches = []
    i, n = 0, len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n or text[i] != "(":
            raise MachineSyntaxError(
                f"expected '(' at column {i + 1} of the branch list", line=lineno
            )
        depth, j = 1, i + 1
        while j < n and depth:
            if text[j] == "(":
                depth += 1
            elif text[j] == ")":
                depth -= 1
            j += 1
        if depth:
            raise MachineSyntaxError("unbalanced parentheses in branch", line=lineno)
        branches.append(_parse_branch(text[i + 1 : j - 1], lineno, kind, index))
        i = j
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            return branches
        if text[i] != "+":
            raise MachineSyntaxError(
                f"expected '+' between branches at column {i + 1}", line=lineno
            )
        i += 1


def _parse_branch(interior, lineno, kind, index):
    parts = [p.strip() for p in interior.split(",")]
    arity = 3 if kind == "tm" else 4
    if len(parts) != arity:
        raise MachineSyntaxError(
            f"a {kind} branch has {arity} fields, got {len(parts)}", line=lineno
        )
    next_name, write, move = parts[0], parts[1], parts[2]
    if next_name not in index:
        raise MachineSyntaxError(f"undeclared state {next_name!r}", line=lineno)
    if write not in SYMBOLS:
        raise MachineSyntaxError(f"bad write symbol {write!r}", line=lineno)
    if move not in MOVES:
        raise MachineSyntaxError(f"bad move {move!r}", line=lineno)
    if kind == "tm":
        return (write, move, index[next_name])
    try:
        amp = parse_amp(parts[3])
    except MachineSyntaxError as e:
        raise MachineSyntaxError(f"bad weight {parts[3]!r}: {e}", line=lineno) from e
    if kind == "ptm":
        try:
            weight = amp.real().as_rational()
        except ValueError:
            raise MachineSyntaxError(
                f"probability must be rational, got {parts[3]!r}", line=lineno
            ) from None
        return (write, move, index[next_name], weight)
    return (write, move, index[next_name], amp)


def serialize_machine(m: MachineDesc) -> str:
    """Canonical text; parse_machine(serialize_machine(m)) == m."""
    lines = [
        f"kind {m.kind}",
        f"name {m.name}",
        "states " + " ".join(m.states),
        f"halt {m.states[m.halt]}",
    ]
    for (q, sym), branches in m.rules:
        body = " + ".join(_render_branch(m, b) for b in branches)
        lines.append(f"rule {m.states[q]} {sym} -> {body}")
    return "\n".join(lines) + "\n"


def _render_branch(m, b):
    target = f"{m.states[b.next_state]}, {b.write}, {b.move}"
    if b.weight is None:
        return f"({target})"
    return f"({target}, {format_amp(b.weight)})"
