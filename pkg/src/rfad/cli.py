"""Command-line entry point.

Subcommands: simulate, calibrate, fingerprint, classify, coupling,
stats, export. Every subcommand is a pure pipeline over files: the same
inputs, config and seed produce byte-identical outputs.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import coupling as _coupling
from . import ic as _ic
from . import kiviat as _kiviat
from . import population as _population
from . import readlog as _readlog
from . import signal as _signal
from .classify import classify as _classify_value
from .classify import reliability_report
from .config import load_config
from .errors import DataError, NumericalError, RfadError
from .fingerprint import (ChannelReading, averaged_fingerprint,
                          build_fingerprint, fingerprint_record,
                          load_fingerprints, save_fingerprints)
from .hand import FINGERS
from .units import dbm_from_watts

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write_json(payload, path):
    import os
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def _cmd_simulate(args):
    config = load_config(args.config)
    series = {}
    for channel in (args.channels or FINGERS):
        if args.material:
            means = config.class_means()
            if args.material not in means:
                raise DataError(f"unknown reference material {args.material!r}; "
                                f"known: {sorted(means)}")
            model = config.antenna_models[channel]
            air = _ic.sensor_code(config.ic, _ic.antenna_response(model, 1.0)).code
            fluct = _signal.material_fluctuation_model(
                args.material, baseline=int(round(air - means[args.material])))
        else:
            fluct = _signal.FluctuationModel(
                baseline=args.baseline,
                sawtooth_frequency=config.sawtooth_frequency,
                sample_period=config.sample_period)
        series[channel] = _signal.synthesize_series(
            fluct, args.duration, seed=args.seed + FINGERS.index(channel),
            channel=channel)
    _readlog.write_series(series, args.output)
    print(f"wrote {sum(len(s) for s in series.values())} samples to {args.output}")


def _cmd_calibrate(args):
    config = load_config(args.config)
    series = _readlog.load_code_series(args.log)
    baseline = _readlog.calibrate(series, window=config.window)
    _readlog.save_baseline(baseline, args.output)
    gaps = f", gaps: {', '.join(baseline.gaps)}" if baseline.gaps else ""
    print(f"baseline for {len(baseline.codes)} channels -> {args.output}{gaps}")


def _cmd_fingerprint(args):
    config = load_config(args.config)
    baseline = _readlog.load_baseline(args.baseline)
    series = _readlog.load_code_series(args.log)
    readings = []
    for channel in FINGERS:
        if channel in series:
            code = _signal.estimate_code(series[channel], config.window,
                                         config.estimator)
            readings.append(ChannelReading(channel=channel, code=code,
                                           responsive=True))
        else:
            readings.append(ChannelReading(channel=channel, code=None,
                                           responsive=False))
    fp = build_fingerprint(readings, baseline, material_label=args.label)
    save_fingerprints([fp], args.output)
    print(json.dumps(fingerprint_record(fp), indent=2))


def _cmd_classify(args):
    config = load_config(args.config)
    classes = config.classes()
    if args.value is not None:
        values = [("value", args.value)]
    else:
        fps = load_fingerprints(args.fingerprints)
        values = [(fp.material_label or f"fingerprint-{i + 1}",
                   averaged_fingerprint(fp)) for i, fp in enumerate(fps)]
    for label, value in values:
        print(f"{label}: F={value:.2f} -> {_classify_value(value, classes)}")


def _cmd_coupling(args):
    config = load_config(args.config)
    if args.matrix:
        z = _coupling.load_impedance_matrix(args.matrix)
        k = _coupling.power_wave_scattering(
            z, _coupling.PortLoad(config.ic_load))
        labels = z.port_labels
        report = _coupling.normalize_coupling(k)
    else:
        labels = FINGERS
        report = _coupling.normalize_coupling(
            _coupling.REFERENCE_COUPLING_MAGNITUDES)
    print(_coupling.coupling_summary(report, labels))
    if args.output:
        _coupling.export_coupling_csv(report, labels, args.output)
        print(f"wrote {args.output}")
    if args.turn_on:
        print("Turn-on power per channel:")
        for channel in FINGERS:
            p = _coupling.turn_on_power(args.tau,
                                        config.transducer_gains[channel],
                                        config.ic_sensitivity)
            print(f"  {channel}: {1e3 * p:.3g} mW ({dbm_from_watts(p):.1f} dBm)")


def _cmd_stats(args):
    if args.generate:
        records = _population.generate_population(
            _population.PopulationSpec(), seed=args.seed, out_dir=args.log_dir)
        if args.records_out:
            _population.save_records(records, args.records_out)
    else:
        records = _population.load_records(args.records)
    report = reliability_report(records)
    payload = {
        "trials": len(records),
        "ccd_percent": list(report.ccd),
        "per_finger_rates": report.per_finger_rates,
        "joint_rates": report.joint_rates,
    }
    text = json.dumps(payload, indent=2)
    if args.output:
        _write_json(payload, args.output)
        print(f"wrote {args.output}")
    else:
        print(text)


def _cmd_export(args):
    fps = load_fingerprints(args.fingerprints)
    _kiviat.export_kiviat(fps, args.output)
    print(f"wrote {args.output} (+ CSV twin)")


def build_parser() -> _Parser:
    parser = _Parser(prog="rfad",
                     description="Multi-channel auto-tuning RFID dielectric "
                                 "sensing toolkit")
    parser.add_argument("--config", help="session config file (layered on defaults)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize sensor-code series")
    p.add_argument("--baseline", type=int, default=200)
    p.add_argument("--duration", type=float, default=70.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--material", default=None)
    p.add_argument("--channels", nargs="*", choices=FINGERS, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("calibrate", help="air baseline from a reader log")
    p.add_argument("log")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("fingerprint", help="hand fingerprint from log + baseline")
    p.add_argument("log")
    p.add_argument("--baseline", required=True)
    p.add_argument("--label", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_fingerprint)

    p = sub.add_parser("classify", help="threshold classification")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--fingerprints")
    group.add_argument("--value", type=float, default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("coupling", help="multiport coupling report")
    p.add_argument("--matrix", help="impedance matrix file (default: shipped fixture)")
    p.add_argument("--turn-on", action="store_true")
    p.add_argument("--tau", type=float, default=0.85)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_coupling)

    p = sub.add_parser("stats", help="population reliability statistics")
    p.add_argument("--records", help="trial records JSON")
    p.add_argument("--generate", action="store_true",
                   help="generate the default synthetic campaign")
    p.add_argument("--seed", type=int, default=_population.DEFAULT_POPULATION_SEED)
    p.add_argument("--log-dir", default=None)
    p.add_argument("--records-out", default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("export", help="Kiviat radar chart (SVG + CSV)")
    p.add_argument("fingerprints")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"rfad: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DataError, RfadError, OSError) as exc:
        print(f"rfad: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
