"""Marginal likelihoods and Bayes factors for the HLA-B count table.

    python scripts/reproduce_dna_examples.py [--table path.csv] [--dps 40]
"""
import argparse

from revmarkov.inference import reversibility_diagnostics, run_bayes_tests
from revmarkov.io import data_path, read_count_table


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--table", default=str(data_path("hla_b_bigrams.csv")))
    parser.add_argument("--dps", type=int, default=40, help="mpmath working precision")
    args = parser.parse_args()

    table = read_count_table(open(args.table).read())
    print(f"sequence length {table.length}, start {table.symbols[table.start]}, end {table.symbols[table.end]}")
    print("symbol counts", dict(zip(table.symbols, table.symbol_counts.tolist())))
    report = run_bayes_tests(table, dps=args.dps)
    print()
    print(report.table())
    print()
    print("forward/backward transition ratios")
    for p in reversibility_diagnostics(table).pairs:
        print(f"  {p.v}{p.w}: {p.ratio_text:>8}  (difference {p.difference:+d})")


if __name__ == "__main__":
    main()
