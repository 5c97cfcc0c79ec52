"""Command-line front end: build, check, simulate, resources, trotter.

Exit codes: 0 success, 1 usage error, 2 runtime or budget error. All output is
deterministic for fixed flags and seed; seeds default to 0 and are printed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import circuit, lattice, oracle, schwinger, sim

# Exhaustive enumeration above this many environment bits is refused.
MAX_ENUM_BITS = 20


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


class RuntimeFailure(Exception):
    """Mapped to exit code 2."""


def _spec_from_args(args) -> lattice.LatticeSpec:
    if args.dim not in (1, 2, 3):
        raise RuntimeFailure(f"unsupported dimension {args.dim}: must be 1, 2, or 3")
    try:
        return lattice.make_spec(
            args.dim, args.n, lattice.GaugeGroup(args.group), args.matter
        )
    except (lattice.LatticeError, ValueError) as exc:
        raise RuntimeFailure(str(exc)) from exc


def _add_spec_flags(p, required=True):
    p.add_argument("--dim", type=int, required=required, help="spatial dimension (1, 2, or 3)")
    p.add_argument("--n", type=int, required=required, help="bits per link")
    p.add_argument("--group", choices=["u1", "z2n"], default="u1")
    p.add_argument("--matter", choices=["dirac", "none"], default="dirac")


def cmd_build(args) -> int:
    spec = _spec_from_args(args)
    circ = oracle.build_query(spec)
    rep = circuit.resources(circ.without_measurements())
    header = [
        f"oracle query circuit: dim={args.dim} n={args.n} group={args.group} matter={args.matter}",
        f"wires={circ.n_wires} decomposed_ancillas={rep.ancilla_count}",
    ]
    text = circuit.to_text(circ, header_comments=header)
    with open(args.out, "w") as fh:
        fh.write(text)
    print(f"wrote {args.out}")
    print(f"wires: {circ.n_wires} (+{rep.ancilla_count} ancillas after decomposition)")
    return 0


def cmd_check(args) -> int:
    if args.state is None and not args.exhaustive:
        raise RuntimeFailure("check needs --exhaustive or --state FILE")
    if args.state is not None:
        return _check_state(args)
    spec = _spec_from_args(args)
    layout = oracle.oracle_layout(spec, with_query=True)
    if layout.env_bits > MAX_ENUM_BITS:
        raise RuntimeFailure(
            f"{layout.env_bits} environment bits exceeds the exhaustive budget "
            f"({MAX_ENUM_BITS}); use the basis-path API on targeted states instead"
        )
    report = oracle.exhaustive_check(spec)
    print(f"{report.correct}/{report.total} verdicts correct")
    print(f"restoration: {'ok' if report.all_restored else 'FAILED'}")
    if not report.all_correct:
        print(f"first mismatching environments: {report.mismatches}")
        raise RuntimeFailure("exhaustive check failed")
    return 0


def _check_state(args) -> int:
    try:
        with open(args.state) as fh:
            assignment = lattice.assignment_from_text(fh.read())
    except OSError as exc:
        raise RuntimeFailure(f"cannot read {args.state}: {exc}") from exc
    except lattice.LatticeError as exc:
        raise RuntimeFailure(str(exc)) from exc
    spec = assignment.spec
    if args.dim is not None and args.dim != spec.dimension:
        raise RuntimeFailure(f"--dim {args.dim} does not match file (D={spec.dimension})")
    if args.n is not None and args.n != spec.bits_per_link:
        raise RuntimeFailure(f"--n {args.n} does not match file (n={spec.bits_per_link})")
    circ = oracle.controlled_oracle(spec)
    all_ok = True
    sites = [args.site] if args.site is not None else range(spec.n_sites)
    for site in sites:
        env = assignment.environment(site)
        verdict, restored = oracle.query_verdict(circ, oracle.environment_bits(spec, env))
        expected_bits = oracle.environment_bits(spec, env)
        if restored != expected_bits:
            raise RuntimeFailure(f"site {site}: environment wires not restored")
        ok = verdict == 1
        all_ok &= ok
        print(f"site {site}: {'physical' if ok else 'unphysical'}")
    print(f"verdict: {'physical' if all_ok else 'unphysical'}")
    return 0


def cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    circ = oracle.build_query(spec).without_measurements()
    rng = np.random.default_rng(args.seed)
    if circ.n_wires > sim.MAX_STATEVECTOR_WIRES:
        raise RuntimeFailure(f"{circ.n_wires} wires exceeds the statevector budget")
    if args.state is not None:
        with open(args.state) as fh:
            assignment = lattice.assignment_from_text(fh.read())
        env = assignment.environment(args.site)
        bits = oracle.environment_bits(spec, env)
        full = (*bits, *(0,) * (circ.n_wires - len(bits)))
        psi = sim.basis_state(circ, full)
    else:
        psi = sim.zero_state(circ)
    outcome, post = oracle.measure_physicality(psi, spec, args.site, rng)
    print(f"seed: {args.seed}")
    print(f"query outcome: {'flipped (physical)' if outcome else 'not flipped (unphysical)'}")
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(sim.dump_state(post))
        print(f"wrote post-measurement state to {args.dump}")
    return 0


def cmd_resources(args) -> int:
    spec = _spec_from_args(args)

    def report_for(n):
        s = lattice.make_spec(args.dim, n, spec.group, args.matter)
        return circuit.resources(oracle.build_oracle(s))

    if args.sweep:
        try:
            lo, hi = (int(v) for v in args.sweep.split(".."))
        except ValueError as exc:
            raise RuntimeFailure(f"bad --sweep range {args.sweep!r}: want N1..N2") from exc
        if not 1 <= lo < hi:
            raise RuntimeFailure(f"bad --sweep range {args.sweep!r}")
        points = [(n, report_for(n).t_count_excluding_multicz) for n in range(lo, hi + 1)]
        diffs = {b[1] - a[1] for a, b in zip(points, points[1:])}
        for n, t in points:
            print(f"n={n}: t_count_excluding_multicz={t}")
        if len(diffs) == 1:
            slope = diffs.pop()
            intercept = points[0][1] - slope * points[0][0]
            print(f"fit: t_count_excluding_multicz(n) = {slope}*n + {intercept}")
        else:
            print(f"fit: not linear (slopes {sorted(diffs)})")
        return 0

    rep = report_for(args.n)
    print(f"T count (MultiCZ excluded): {rep.t_count_excluding_multicz}")
    print(f"T count (total):            {rep.t_count}")
    print(f"CNOT count:                 {rep.cnot_count}")
    print(f"ancilla count:              {rep.ancilla_count}")
    return 0


def cmd_trotter(args) -> int:
    try:
        dts = [float(tok) for tok in args.dt_list.split(",") if tok]
    except ValueError as exc:
        raise RuntimeFailure(f"bad --dt-list {args.dt_list!r}") from exc
    if not dts:
        raise RuntimeFailure("empty --dt-list")
    spec = schwinger.SchwingerSpec(args.nph, args.n, x=args.x, mu=args.mu)
    if spec.n_wires > sim.MAX_STATEVECTOR_WIRES:
        raise RuntimeFailure(f"{spec.n_wires} wires exceeds the statevector budget")
    rows = schwinger.leakage_experiment(spec, dts, args.steps)
    csv = schwinger.write_leakage_csv(rows)
    with open(args.out, "w") as fh:
        fh.write(csv)
    print(f"seed: {args.seed}")
    print(f"ordering: default")
    print(f"wrote {args.out}")
    try:
        slope = schwinger.fit_loglog_slope(rows)
        print(f"log-log slope: {slope:.17g}")
    except schwinger.SchwingerError:
        print("log-log slope: undefined (leakage at the noise floor)")
    return 0


def make_parser() -> _Parser:
    p = _Parser(prog="gausslaw", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write an oracle query circuit file")
    _add_spec_flags(b)
    b.add_argument("--out", required=True)
    b.set_defaults(fn=cmd_build)

    c = sub.add_parser("check", help="verify oracle verdicts")
    _add_spec_flags(c, required=False)
    c.add_argument("--exhaustive", action="store_true")
    c.add_argument("--state", default=None, help="lattice assignment file")
    c.add_argument("--site", type=int, default=None)
    c.set_defaults(fn=cmd_check)

    s = sub.add_parser("simulate", help="run one seeded projective query")
    _add_spec_flags(s)
    s.add_argument("--state", default=None, help="lattice assignment file")
    s.add_argument("--site", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dump", default=None, help="write the post-measurement state here")
    s.set_defaults(fn=cmd_simulate)

    r = sub.add_parser("resources", help="T-count report for an oracle")
    _add_spec_flags(r)
    r.add_argument("--sweep", default=None, help="fit over a range of n, e.g. 1..4")
    r.set_defaults(fn=cmd_resources)

    t = sub.add_parser("trotter", help="Trotter-leakage experiment (CSV)")
    t.add_argument("--nph", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--x", type=float, default=1.0)
    t.add_argument("--mu", type=float, default=1.0)
    t.add_argument("--dt-list", required=True, help="comma-separated step sizes")
    t.add_argument("--steps", type=int, required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)
    t.set_defaults(fn=cmd_trotter)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except RuntimeFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (circuit.CircuitError, lattice.LatticeError, oracle.OracleError,
            schwinger.SchwingerError, sim.SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
