""" Text formats: permutation spec files, cycle notation and MCT netlists.

Permutation spec file:

    # comment
    n=3
    perm: 1 2 0 3 4 5 6 7        (or)    cycles: (0,1,2)

Netlist file (a subset of the RevLib .real format, positive controls only):

    .version 1.0
    .numvars 3
    .variables x0 x1 x2
    .begin
    t3 x1 x2 x0
    .end

x_i is bit i of the integer encoding, x0 the least significant.
"""

import re

from typing import Dict, List, Optional, Sequence, Tuple

from source.misc.errors import CapExceeded, ParseError, UnknownVariable
from source.model.circuit import Circuit, Gate
from source.model.permutation import DEFAULT_MAX_LINES, Cycle, Permutation, cycle_product, from_images, to_ccf


HEADER_PATTERN = re.compile(r'n\s*=\s*(\S+)$')
BODY_PATTERN = re.compile(r'(perm|cycles)\s*:')
GATE_PATTERN = re.compile(r't(\d+)$', re.IGNORECASE)

# (line, column) of a character, both 1-based
Position = Tuple[int, int]


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0]


def _scan_cycles(chars: Sequence[Tuple[str, Position]], n: Optional[int]) -> List[Cycle]:
    cycles: List[Cycle] = []
    seen: Dict[int, Position] = {}
    current: Optional[List[int]] = None
    number, number_at = '', None
    expect_value = False

    def close_number():
        nonlocal number, number_at
        if not number:
            return
        value = int(number)
        if n is not None and value >= 1 << n:
            raise ParseError(f'value {value} is outside 0..{(1 << n) - 1}', *number_at)
        if value in seen:
            raise ParseError(f'value {value} repeats (first seen at line {seen[value][0]}, column {seen[value][1]})', *number_at)
        seen[value] = number_at
        current.append(value)
        number, number_at = '', None

    last = (1, 1)
    for ch, at in chars:
        last = at
        if ch.isspace():
            if number:
                close_number()
            continue
        if ch == '(':
            if current is not None:
                raise ParseError('nested "(" in cycle notation', *at)
            current, expect_value = [], True
        elif ch.isdigit():
            if current is None:
                raise ParseError('value outside of parentheses', *at)
            if not number and not expect_value:
                raise ParseError('missing "," between values', *at)
            if not number:
                number_at = at
            number += ch
            expect_value = False
        elif ch == ',':
            if current is None or (not number and expect_value):
                raise ParseError('unexpected ","', *at)
            close_number()
            expect_value = True
        elif ch == ')':
            if current is None:
                raise ParseError('unmatched ")"', *at)
            close_number()
            if expect_value and current:
                raise ParseError('trailing "," in cycle', *at)
            # a 1-element cycle is a fixed point
            if len(current) >= 2:
                cycles.append(Cycle(tuple(current)))
            current = None
        else:
            raise ParseError(f'unexpected character "{ch}"', *at)

    if current is not None:
        raise ParseError('unterminated cycle, missing ")"', *last)
    return cycles


def parse_cycles(text: str, n: Optional[int] = None) -> List[Cycle]:
    """ Read cycle notation such as "(3,5,6,7,9)(22,27)"; "()" is the identity.

    Args:
        text (str): Cycle notation, possibly over several lines.
        n (int, optional): Line count bounding the values. Defaults to None.

    Raises:
        ParseError: Malformed notation, repeated or out-of-range values.

    Returns:
        List[Cycle]: Cycles in the order written, fixed points dropped.
    """
    chars = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        chars.extend((ch, (line_no, col)) for col, ch in enumerate(line, start=1))
        chars.append(('\n', (line_no, len(line) + 1)))
    return _scan_cycles(chars, n)


def format_cycles(cycles: Sequence[Cycle]) -> str:
    return ''.join(str(c) for c in cycles) if cycles else '()'


def parse_perm(text: str, cap: Optional[int] = DEFAULT_MAX_LINES) -> Permutation:
    """ Read a permutation spec file.

    Raises:
        ParseError: Malformed header or body, with line and column.
        NotBijective: The image list repeats or leaves the value range.
        LengthMismatch: The image list does not hold 2^n values.
        CapExceeded: n is above the cap.

    Returns:
        Permutation: The validated permutation.
    """
    n: Optional[int] = None
    mode: Optional[str] = None
    body: List[Tuple[int, int, str]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())

        if n is None:
            match = HEADER_PATTERN.match(stripped)
            if match is None:
                raise ParseError('expected header "n=<lines>"', line_no, indent + 1)
            try:
                n = int(match.group(1))
            except ValueError:
                raise ParseError(f'line count "{match.group(1)}" is not an integer', line_no, indent + 1 + match.start(1))
            if n < 1:
                raise ParseError(f'line count must be positive, got {n}', line_no, indent + 1 + match.start(1))
            if cap is not None and n > cap:
                raise CapExceeded(n, cap)
            continue

        if mode is None:
            match = BODY_PATTERN.match(stripped)
            if match is None:
                raise ParseError('expected "perm:" or "cycles:"', line_no, indent + 1)
            mode = match.group(1)
            offset = indent + match.end()
            body.append((line_no, offset, line[offset:]))
            continue

        body.append((line_no, 0, line))

    if n is None:
        raise ParseError('missing header "n=<lines>"', 1, 1)
    if mode is None:
        raise ParseError('missing "perm:" or "cycles:" body', len(text.splitlines()) or 1, 1)

    if mode == 'perm':
        images = []
        for line_no, offset, segment in body:
            for token in re.finditer(r'\S+', segment):
                try:
                    images.append(int(token.group()))
                except ValueError:
                    raise ParseError(f'"{token.group()}" is not an integer', line_no, offset + token.start() + 1)
        return from_images(n, images, cap=cap)

    chars = []
    for line_no, offset, segment in body:
        chars.extend((ch, (line_no, offset + col)) for col, ch in enumerate(segment, start=1))
        chars.append(('\n', (line_no, offset + len(segment) + 1)))
    cycles = _scan_cycles(chars, n)
    return from_images(n, cycle_product(cycles, n).images, cap=cap)


def format_perm(p: Permutation, as_cycles: bool = False) -> str:
    """ Write a permutation spec file. """
    if as_cycles:
        body = 'cycles: ' + format_cycles(to_ccf(p).cycles)
    else:
        body = 'perm: ' + ' '.join(str(v) for v in p.tolist())
    return f'n={p.n}\n{body}\n'


def write_netlist(c: Circuit, names: Optional[Sequence[str]] = None) -> str:
    """ Serialize a circuit; controls ascend, the target comes last. """
    names = list(names) if names is not None else [f'x{i}' for i in range(c.n)]
    assert len(names) == c.n, f'Expected {c.n} variable names, got {len(names)}'

    lines = ['.version 1.0', f'.numvars {c.n}', '.variables ' + ' '.join(names), '.begin']
    for g in c.gates:
        operands = [names[i] for i in sorted(g.controls)] + [names[g.target]]
        lines.append(f't{len(operands)} ' + ' '.join(operands))
    lines.append('.end')
    return '\n'.join(lines) + '\n'


def parse_netlist(text: str) -> Circuit:
    """ Read a netlist.

    `.variables` names map to bit indices by position. RevLib `.inputs`,
    `.outputs`, `.constants` and `.garbage` lines are accepted as long as no
    line is a constant or garbage line.

    Raises:
        ParseError: Malformed or unsupported content, with line and column.
        UnknownVariable: A gate names a line missing from `.variables`.

    Returns:
        Circuit: The parsed circuit.
    """
    numvars: Optional[int] = None
    index: Optional[Dict[str, int]] = None
    gates: List[Gate] = []
    state = 'header'

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r'\S+', line)]
        if not tokens:
            continue
        head, head_col = tokens[0]
        keyword = head.lower()

        if state == 'done':
            raise ParseError(f'content after ".end": "{head}"', line_no, head_col)

        if state == 'header':
            if keyword == '.version':
                continue
            if keyword == '.numvars':
                if len(tokens) != 2 or not tokens[1][0].isdigit():
                    raise ParseError('".numvars" takes one integer', line_no, head_col)
                numvars = int(tokens[1][0])
                continue
            if keyword == '.variables':
                index = {}
                for name, col in tokens[1:]:
                    if name in index:
                        raise ParseError(f'variable "{name}" declared twice', line_no, col)
                    index[name] = len(index)
                if not index:
                    raise ParseError('".variables" needs at least one name', line_no, head_col)
                continue
            if keyword in ('.inputs', '.outputs'):
                continue
            if keyword in ('.constants', '.garbage'):
                flags = ''.join(t for t, _ in tokens[1:])
                if any(ch != '-' for ch in flags):
                    raise ParseError(f'"{head}" lines are not supported, expected only "-"', line_no, tokens[1][1])
                continue
            if keyword == '.begin':
                if index is None:
                    raise ParseError('".begin" before ".variables"', line_no, head_col)
                if numvars is not None and numvars != len(index):
                    raise ParseError(f'".numvars {numvars}" but {len(index)} variables declared', line_no, head_col)
                state = 'body'
                continue
            raise ParseError(f'unexpected "{head}" in the header', line_no, head_col)

        # gate body
        if keyword == '.end':
            state = 'done'
            continue

        match = GATE_PATTERN.match(head)
        if match is None:
            raise ParseError(f'unsupported gate "{head}", only t<k> gates are accepted', line_no, head_col)
        arity = int(match.group(1))
        operands = tokens[1:]
        if arity < 1 or arity != len(operands):
            raise ParseError(f'gate "{head}" expects {arity} lines, got {len(operands)}', line_no, head_col)

        lines = []
        for name, col in operands:
            if name not in index:
                raise UnknownVariable(f'unknown variable "{name}"', line_no, col)
            if index[name] in lines:
                raise ParseError(f'variable "{name}" used twice in one gate', line_no, col)
            lines.append(index[name])
        gates.append(Gate(frozenset(lines[:-1]), lines[-1]))

    if state == 'header':
        raise ParseError('missing ".begin"', len(text.splitlines()) or 1, 1)
    if state == 'body':
        raise ParseError('missing ".end"', len(text.splitlines()) or 1, 1)

    return Circuit(len(index), tuple(gates))
