import sys
import json
import argparse

from typing import List, Optional

from source.data.benchmarks import PUBLISHED_HWB_COSTS, gen_hwb, gen_random_even
from source.data.formats import format_perm, parse_cycles, parse_netlist, parse_perm, write_netlist
from source.misc.errors import SynthesisError, VerificationFailed
from source.model.cost import COST_VARIANTS, CostModel, circuit_cost
from source.model.permutation import DEFAULT_MAX_LINES
from source.synth.blocks import BlockType
from source.synth.counting import (CycleIndex, block_space_size, catalan_inequivalent_2cycle_count,
                                   factorization_count, inequivalent_factorization_count, max_disjoint,
                                   n5, ndcm)
from source.synth.decomposer import enumerate_decompositions, validate
from source.synth.pipeline import SynthConfig, synthesize, verify


EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


# argument parser
def argument_parser(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description='Synthesis of reversible permutations into multi-controlled Toffoli netlists.')
    commands = parser.add_subparsers(dest='command', required=True)

    # synth args
    synth = commands.add_parser('synth', help='Synthesize a permutation spec file into a netlist.')
    synth.add_argument('input', type=str, help='Permutation spec file ("n=..." header, "perm:" or "cycles:" body).')
    synth.add_argument('-o', '--output', type=str, default=None, help='Netlist output file. Default is stdout.')
    synth.add_argument('--config', type=str, default=None, help='JSON file with synthesis settings; flags override it. Default is None.')
    synth.add_argument('--budget-ms', type=int, default=None, help='Time budget of the decomposition search in milliseconds. Default is 10000, or unlimited with --max-decomps.')
    synth.add_argument('--max-decomps', type=int, default=None, help='Decompositions tried per long cycle. Default is 8.')
    synth.add_argument('--trivial-assign', action='store_true', default=False, help='Pair cycles consecutively instead of by minimum-weight matching.')
    synth.add_argument('--no-postopt', action='store_true', default=False, help='Skip peephole post-optimization.')
    synth.add_argument('--no-presynth', action='store_true', default=False, help='Skip fixing 0 and the powers of two before decomposition.')
    synth.add_argument('--allow-odd', type=str, default=None, choices=['extend', 'error'], help='Handling of odd permutations. Default is "extend".')
    synth.add_argument('--seed', type=int, default=None, help='Seed recorded with the run. Default is 0.')
    synth.add_argument('--cost-model', type=str, default=None, choices=list(COST_VARIANTS), help='Cost model. Default is "elementary".')
    synth.add_argument('--kappa-cache', type=str, default=None, help='Directory caching canonical block circuits across runs. Default is None.')
    synth.add_argument('--report', type=str, default=None, help='Write the cost report as JSON to this file. Default is None.')
    synth.add_argument('--verbose', action='store_true', default=False, help='Print search progress.')

    # verify args
    check = commands.add_parser('verify', help='Check a netlist against a permutation spec file by simulation.')
    check.add_argument('netlist', type=str, help='Netlist file.')
    check.add_argument('perm', type=str, help='Permutation spec file.')

    # cost args
    cost = commands.add_parser('cost', help='Print gate count and quantum cost of a netlist.')
    cost.add_argument('netlist', type=str, help='Netlist file.')
    cost.add_argument('--cost-model', type=str, default='elementary', choices=list(COST_VARIANTS), help='Cost model. Default is "elementary".')

    # count args
    count = commands.add_parser('count', help='Closed-form factorization and decomposition counts.')
    query = count.add_mutually_exclusive_group(required=True)
    query.add_argument('--ndcm', type=int, default=None, help='Number of maximally disjoint 5-cycle decompositions of an N-cycle.')
    query.add_argument('--n5', type=int, default=None, help='Fewest 5-cycles in a minimal decomposition of an N-cycle.')
    query.add_argument('--max-disjoint', type=int, default=None, help='Most disjoint 5-cycles detachable from an N-cycle.')
    query.add_argument('--catalan', type=int, default=None, help='Inequivalent transposition factorizations of an N-cycle.')
    query.add_argument('--index', type=str, default=None, help='Cycle index "k:i_k,..."; needs --length.')
    query.add_argument('--block', type=str, default=None, help='Block tag among P22, S3, P33, P42, P44, S5, P55; needs --lines.')
    count.add_argument('--length', type=int, default=None, help='Length of the factored cycle for --index.')
    count.add_argument('--lines', type=int, default=None, help='Line count for --block.')

    # decompose args
    decompose = commands.add_parser('decompose', help='List 5-cycle decompositions of cycles given in cycle notation.')
    decompose.add_argument('cycles', type=str, help='Cycle notation, e.g. "(1,2,3,4,5,6,7)".')
    decompose.add_argument('--limit', type=int, default=None, help='Decompositions listed per cycle. Default is None (all).')

    # gen args
    gen = commands.add_parser('gen', help='Generate a benchmark permutation spec file.')
    gen.add_argument('kind', type=str, choices=['hwb', 'random-even'], help='Benchmark family.')
    gen.add_argument('lines', type=int, help='Number of lines.')
    gen.add_argument('--seed', type=int, default=0, help='Seed for random-even. Default is 0.')
    gen.add_argument('-o', '--output', type=str, default=None, help='Output file. Default is stdout.')

    args = parser.parse_args(argv)

    # assertions and warnings
    if args.command == 'synth':
        if args.budget_ms == 0 and args.max_decomps is None:
            print('A zero budget evaluates only the first decomposition candidate', file=sys.stderr)
        if args.max_decomps is not None and args.max_decomps > 100:
            print('Decomposition caps above 100 per cycle can take very long', file=sys.stderr)
        if args.max_decomps is not None and args.budget_ms is not None:
            print('Both --max-decomps and --budget-ms are set, the run is not reproducible across machines', file=sys.stderr)

    if args.command == 'count':
        if args.index is not None and args.length is None:
            parser.error('--index needs --length')
        if args.block is not None and args.lines is None:
            parser.error('--block needs --lines')

    if args.command == 'gen' and args.lines > DEFAULT_MAX_LINES:
        print(f'{args.lines} lines is above the default cap of {DEFAULT_MAX_LINES}', file=sys.stderr)

    return args


def _read(path: str) -> str:
    with open(path, encoding='utf-8') as f:
        return f.read()


def _write(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def synth_config(args: argparse.Namespace) -> SynthConfig:
    """ Defaults, then the --config file, then explicit flags. """
    values = {}
    if args.config is not None:
        values.update(json.loads(_read(args.config)))

    if args.max_decomps is not None:
        values['max_decomps_per_cycle'] = args.max_decomps
        values.setdefault('budget_ms', None)
    if args.budget_ms is not None:
        values['budget_ms'] = args.budget_ms
    if args.trivial_assign:
        values['pairing'] = 'trivial'
    if args.no_postopt:
        values['enable_postopt'] = False
    if args.no_presynth:
        values['enable_presynth'] = False
    if args.allow_odd is not None:
        values['allow_odd'] = args.allow_odd
    if args.seed is not None:
        values['seed'] = args.seed
    if args.cost_model is not None:
        values['cost_variant'] = args.cost_model
    if args.kappa_cache is not None:
        values['kappa_cache_dir'] = args.kappa_cache
    if args.verbose:
        values['verbose'] = True
    return SynthConfig.from_dict(values)


def run_synth(args: argparse.Namespace) -> int:
    cfg = synth_config(args)
    p = parse_perm(_read(args.input), cap=cfg.max_lines)
    circuit, report = synthesize(p, cfg)

    _write(args.output, write_netlist(circuit))
    if args.report is not None:
        _write(args.report, report.to_json() + '\n')

    print(f'Synthesized {report.n} lines | Gates: {report.gate_count} | Quantum cost: {report.quantum_cost} '
          f'| Extra lines: {report.extra_lines} | Candidates: {report.decompositions_explored} '
          f'| Time: {report.runtime_ms:.1f} ms', file=sys.stderr)

    if p.n in PUBLISHED_HWB_COSTS and p == gen_hwb(p.n):
        print(f'Published quantum cost for hwb{p.n}: {PUBLISHED_HWB_COSTS[p.n]} (reference only)', file=sys.stderr)
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    circuit = parse_netlist(_read(args.netlist))
    p = parse_perm(_read(args.perm))
    if verify(circuit, p):
        print(f'Verified: {args.netlist} realizes {args.perm}')
        return EXIT_OK
    print(f'Mismatch: {args.netlist} does not realize {args.perm}', file=sys.stderr)
    return EXIT_MISMATCH


def run_cost(args: argparse.Namespace) -> int:
    circuit = parse_netlist(_read(args.netlist))
    model = CostModel(args.cost_model)
    print(f'Lines: {circuit.n} | Gates: {len(circuit)} | Quantum cost: {circuit_cost(circuit, model)}')
    return EXIT_OK


def run_count(args: argparse.Namespace) -> int:
    if args.ndcm is not None:
        print(ndcm(args.ndcm))
    elif args.n5 is not None:
        print(n5(args.n5))
    elif args.max_disjoint is not None:
        print(max_disjoint(args.max_disjoint))
    elif args.catalan is not None:
        print(catalan_inequivalent_2cycle_count(args.catalan))
    elif args.index is not None:
        idx = CycleIndex.parse(args.index)
        print(f'ordered: {factorization_count(args.length, idx)}')
        print(f'inequivalent: {inequivalent_factorization_count(args.length, idx)}')
    else:
        print(block_space_size(BlockType.from_tag(args.block), args.lines))
    return EXIT_OK


def run_decompose(args: argparse.Namespace) -> int:
    for cycle in parse_cycles(args.cycles):
        if len(cycle) <= 5:
            print(f'{cycle}: elementary, no decomposition needed')
            continue
        print(f'{cycle}: {ndcm(len(cycle))} decompositions')
        for d in enumerate_decompositions(cycle, args.limit):
            print(f'  {d} | levels {list(d.levels)} | valid {validate(d, cycle)}')
    return EXIT_OK


def run_gen(args: argparse.Namespace) -> int:
    if args.kind == 'hwb':
        p = gen_hwb(args.lines)
    else:
        p = gen_random_even(args.lines, args.seed)
    _write(args.output, format_perm(p))
    return EXIT_OK


COMMANDS = {
    'synth': run_synth,
    'verify': run_verify,
    'cost': run_cost,
    'count': run_count,
    'decompose': run_decompose,
    'gen': run_gen,
}


def main(argv: Optional[List[str]] = None) -> int:
    """ Command-line entry: 0 on success, 1 on verification failure, 2 on usage or input errors. """
    args = argument_parser(argv)
    try:
        return COMMANDS[args.command](args)
    except VerificationFailed as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_MISMATCH
    except (SynthesisError, OSError, json.JSONDecodeError) as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_USAGE
