#!/usr/bin/env python
import os
import json
import argparse

from datetime import datetime

from source.data.benchmarks import PUBLISHED_HWB_COSTS, gen_hwb, gen_random_even
from source.misc.plot import plot_costs
from source.synth.pipeline import SynthConfig, synthesize


def bench_arguments() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description='Matched versus trivial assignment on benchmark permutations.')
    parser.add_argument('--hwb', type=int, nargs='*', default=[4, 5, 6, 7], help='Line counts of hwb benchmarks. Default is 4 5 6 7.')
    parser.add_argument('--random-even', type=int, nargs='*', default=[4, 5, 6], help='Line counts of random even benchmarks. Default is 4 5 6.')
    parser.add_argument('--seeds', type=int, default=3, help='Random benchmarks per line count. Default is 3.')
    parser.add_argument('--max-decomps', type=int, default=8, help='Decompositions tried per long cycle. Default is 8.')
    parser.add_argument('--save-dir', type=str, default='res', help='Directory of the JSON results and the plot. Default is "res".')
    parser.add_argument('--verbose', action='store_true', default=False, help='Print search progress.')
    return parser.parse_args()


# main entry
if __name__ == '__main__':
    args = bench_arguments()

    benchmarks = [(f'hwb{n}', gen_hwb(n)) for n in args.hwb]
    benchmarks += [(f'rand{n}s{s}', gen_random_even(n, seed=s)) for n in args.random_even for s in range(args.seeds)]

    results = []
    start_time = datetime.now()
    for name, p in benchmarks:
        entry = {'name': name, 'n': p.n, 'published': PUBLISHED_HWB_COSTS.get(p.n) if name.startswith('hwb') else None}
        for pairing in ('matched', 'trivial'):
            cfg = SynthConfig(budget_ms=None, max_decomps_per_cycle=args.max_decomps, pairing=pairing, verbose=args.verbose)
            _, report = synthesize(p, cfg)
            entry[pairing] = report.to_dict()
        results.append(entry)
        print(f'{name} | Matched: {entry["matched"]["quantum_cost"]} | Trivial: {entry["trivial"]["quantum_cost"]}')

    print(f'Benchmarks concluded in {datetime.now() - start_time}')

    os.makedirs(args.save_dir, exist_ok=True)
    with open(os.path.join(args.save_dir, 'bench.json'), 'w', encoding='utf-8') as f:
        json.dump(results, f, indent=2)

    costs = {'matched': [r['matched']['quantum_cost'] for r in results],
             'trivial': [r['trivial']['quantum_cost'] for r in results]}
    if any(r['published'] is not None for r in results):
        costs['published'] = [r['published'] for r in results]
    path = plot_costs([r['name'] for r in results], costs, save_dir=args.save_dir, file_name='bench')
    print(f'Plot saved to {path}')
