import pytest

from hypothesis import given

from source.data.formats import format_cycles, format_perm, parse_cycles, parse_netlist, parse_perm, write_netlist
from source.misc.errors import CapExceeded, LengthMismatch, NotBijective, ParseError, UnknownVariable
from source.model.circuit import Circuit, Gate
from source.model.permutation import Cycle, Permutation, cycle_product

from strategies import circuits


def test_parse_perm_images():
    p = parse_perm('n=2\nperm: 1 0 2 3\n')
    assert p.tolist() == [1, 0, 2, 3]


def test_parse_perm_comments_and_blank_lines():
    text = '# swap two rows\n\n  n = 2   # lines\nperm: 0 1\n       3 2\n'
    assert parse_perm(text).tolist() == [0, 1, 3, 2]


def test_parse_perm_cycles():
    p = parse_perm('n=3\ncycles: (0,1,2)\n  (5, 7)\n')
    assert p == cycle_product([Cycle((0, 1, 2)), Cycle((5, 7))], 3)


def test_parse_perm_identity_notation():
    assert parse_perm('n=3\ncycles: ()\n') == Permutation.identity(3)
    assert parse_perm(format_perm(Permutation.identity(2), as_cycles=True)) == Permutation.identity(2)


def test_repeated_value_position():
    with pytest.raises(ParseError) as err:
        parse_perm('n=3\ncycles: (0,1)(1,2)\n')
    assert (err.value.line, err.value.column) == (2, 15)
    assert str(err.value).startswith('line 2, column 15')


def test_header_errors():
    with pytest.raises(ParseError) as err:
        parse_perm('perm: 0 1\n')
    assert (err.value.line, err.value.column) == (1, 1)

    with pytest.raises(ParseError) as err:
        parse_perm('n=x\nperm: 0 1\n')
    assert (err.value.line, err.value.column) == (1, 3)

    with pytest.raises(ParseError):
        parse_perm('n=0\nperm:\n')
    with pytest.raises(ParseError):
        parse_perm('n=1\n')
    with pytest.raises(CapExceeded):
        parse_perm('n=21\nperm: 0\n')


def test_body_errors():
    with pytest.raises(ParseError) as err:
        parse_perm('n=1\nperm: 1 a\n')
    assert (err.value.line, err.value.column) == (2, 9)

    with pytest.raises(LengthMismatch):
        parse_perm('n=2\nperm: 0 1 2\n')
    with pytest.raises(NotBijective):
        parse_perm('n=2\nperm: 0 1 1 3\n')
    with pytest.raises(NotBijective):
        parse_perm('n=2\nperm: 0 1 2 4\n')
    with pytest.raises(ParseError):
        parse_perm('n=2\ncycles: (0,4)\n')


@pytest.mark.parametrize('text', ['(1,2', '1,2)', '((1,2))', '(1,,2)', '(1,2,)', '(1 2)', '(1;2)'])
def test_malformed_cycles(text):
    with pytest.raises(ParseError):
        parse_cycles(text)


def test_parse_cycles():
    assert parse_cycles('(3,5,6,7,9)(22,27)') == [Cycle((3, 5, 6, 7, 9)), Cycle((22, 27))]
    assert parse_cycles('(4)(1,2)') == [Cycle((1, 2))]
    assert parse_cycles('') == []
    assert format_cycles([Cycle((22, 27)), Cycle((1, 2))]) == '(22,27)(1,2)'
    assert format_cycles([]) == '()'


def test_format_perm():
    p = cycle_product([Cycle((2, 1, 0))], 2)
    assert format_perm(p) == 'n=2\nperm: 2 0 1 3\n'
    assert format_perm(p, as_cycles=True) == 'n=2\ncycles: (0,2,1)\n'
    assert parse_perm(format_perm(p, as_cycles=True)) == p


def test_write_netlist():
    c = Circuit(3, (Gate.make(0, 2, 1), Gate.make(2)))
    assert write_netlist(c) == ('.version 1.0\n.numvars 3\n.variables x0 x1 x2\n.begin\n'
                                't3 x1 x2 x0\nt1 x2\n.end\n')


@given(circuits(max_n=8, max_gates=20))
def test_netlist_round_trip(c):
    assert parse_netlist(write_netlist(c)) == c


def test_revlib_header_lines():
    text = ('# from a benchmark library\n.version 2.0\n.numvars 3\n.variables a b c\n'
            '.inputs a b c\n.outputs a b c\n.constants ---\n.garbage ---\n'
            '.begin\nT3 a b c\nt1 a\n.end\n')
    assert parse_netlist(text) == Circuit(3, (Gate.make(2, 0, 1), Gate.make(0)))


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_netlist('.numvars 2\n.variables x0 x1\n.begin\nt2 x0 y1\n.end\n')
    assert (err.value.line, err.value.column) == (4, 7)


@pytest.mark.parametrize('text', [
    '.numvars 2\n.variables x0 x1\n.begin\nt2 x0 x1\n',
    '.numvars 2\n.variables x0 x1\n.begin\nf2 x0 x1\n.end\n',
    '.numvars 2\n.variables x0 x1\n.begin\nt2 x0\n.end\n',
    '.numvars 3\n.variables x0 x1\n.begin\n.end\n',
    '.numvars 2\n.variables x0 x1\n.begin\n.end\nt1 x0\n',
    '.numvars 2\n.variables x0 x1\n.constants 0-\n.begin\n.end\n',
    '.numvars 2\n.variables x0 x0\n.begin\n.end\n',
    '.numvars 2\n.variables x0 x1\n.begin\nt2 x0 x0\n.end\n',
    '.begin\n.end\n',
    '.numvars 2\n.variables x0 x1\n',
])
def test_netlist_errors(text):
    with pytest.raises(ParseError):
        parse_netlist(text)
