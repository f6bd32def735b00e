import argparse
import json
import logging
import os
import sys
from typing import List, Optional

import pandas
import yaml

from rankmetric import __version__
from rankmetric.channel import ChannelSpec, corrupt as corrupt_word
from rankmetric.field import convert_basis, get_field
from rankmetric.gabidulin import (
    DecodeFailure,
    GabidulinCode,
    decode as decode_word,
    encode as encode_message,
    make_code,
)
from rankmetric.infrastructure.logger import setup_logger, set_console_log_level
from rankmetric.kk import (
    WORKED_EXAMPLE_BASIS,
    KKCode,
    StageTrace,
    cartesian_decode,
    kk_decode,
    lift as lift_word,
    trace_on_basis,
    worked_example,
)
from rankmetric.postprocess.reporting import generate_report
from rankmetric.simulation import Simulation
from rankmetric.utils.helpers import NoAliasLoader
from rankmetric.utils.readers import (
    InstanceSerializer,
    MatrixParsers,
    VectorParsers,
    read_field_record,
    write_field_record,
)

setup_logger()
log = logging.getLogger("rankLogger")

FORMATS = ("json", "csv", "text")


def _load_code(
    preset: str = "g8", code: Optional[str] = None, field: Optional[str] = None
) -> GabidulinCode:
    """
    Code from a YAML/JSON parameter file if given, else from a preset. A field record file
    re-expresses the code in that field's basis (same modulus, converted ``h``).
    """
    if code:
        with open(code, "r") as f_:
            record = yaml.load(f_, NoAliasLoader)
        if not isinstance(record, dict):
            raise ValueError(f"{code}: code file must hold a mapping")
        gab = GabidulinCode.from_dict(record)
    else:
        gab = GabidulinCode.from_preset(preset)
    if field:
        target = get_field(read_field_record(field))
        h = [convert_basis(v, gab.field, target) for v in gab.h]
        log.debug(f"Code re-expressed over {target.spec.to_text()}")
        gab = make_code(gab.n, gab.k, gab.m, h, field=target)
    return gab


def _check_format(format: str) -> None:
    if format not in FORMATS:
        raise ValueError(f"Unknown output format '{format}', choose from {FORMATS}")


def _cell(value):
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return value


def _emit(records: List[dict], format: str) -> None:
    """Prints records to stdout as JSON, CSV (one row per record) or plain text."""
    if format == "json":
        payload = records[0] if len(records) == 1 else records
        print(json.dumps(payload, indent=2))
    elif format == "csv":
        flat = [
            {key: _cell(value) for key, value in r.items() if not isinstance(value, dict)}
            for r in records
        ]
        sys.stdout.write(pandas.DataFrame(flat).to_csv(index=False, lineterminator="\n"))
    else:
        lines = [f"{k}: {v}" for r in records for k, v in r.items()]
        sys.stdout.write("".join(line + "\n" for line in lines))


def code(
    preset: str = "g8",
    code: Optional[str] = None,
    field: Optional[str] = None,
    format: str = "text",
    output: Optional[str] = None,
    **_,
) -> int:
    """
    Prints the parameters of a Gabidulin code: length, dimension, field, minimum distance
    and the parity-check vector ``h``.

    Example usage from a terminal:
    ::

        rankmetric code --preset g16 --format json

    Args:
        preset (str): Named code (``g4``, ``g8`` or ``g16``).
        code (str): Optional YAML file with explicit code parameters (n, k, m, prime_poly, h).
        field (str): Optional field record; the code is re-expressed in its basis.
        format (str): Output format.
        output (str): File receiving the field record of the code.

    Returns:
        Exit status.
    """
    log.info(f"rankmetric v{__version__} | Code")
    _check_format(format)
    gab = _load_code(preset, code, field)
    record = {
        "n": gab.n,
        "k": gab.k,
        "m": gab.m,
        "d": gab.d,
        "t": gab.t,
        "field": gab.field.spec.to_text(),
        "h": list(gab.h),
    }
    if format == "json":
        record["G"] = [list(row) for row in gab.G]
    _emit([record], format)
    if output:
        write_field_record(output, gab.field.spec)
        log.info(f"Field record written to {output}")
    return 0


def encode(
    input: str,
    preset: str = "g8",
    code: Optional[str] = None,
    field: Optional[str] = None,
    output: Optional[str] = None,
    **_,
) -> int:
    """
    Encodes a message word of ``k`` symbols. The codeword is printed; with ``--output`` it
    is written there, and its lifting ``[I | x]`` is written next to it with a ``.mat``
    extension.

    Example usage from a terminal:
    ::

        rankmetric encode message.txt --preset g8 --output codeword.txt

    Args:
        input (str): File holding the message as comma-separated integers.
        preset (str): Named code.
        code (str): Optional code parameter file.
        output (str): Codeword file.
    """
    log.info(f"rankmetric v{__version__} | Encode")
    gab = _load_code(preset, code, field)
    message = VectorParsers.read(input)
    x = encode_message(gab, message)
    if output:
        VectorParsers.write(output, x)
        lifted = os.path.splitext(output)[0] + ".mat"
        MatrixParsers.write(lifted, lift_word(gab, x))
        log.info(f"Codeword written to {output}, lifted matrix to {lifted}")
    print(VectorParsers.format(x))
    return 0


def lift(
    input: str,
    preset: str = "g8",
    code: Optional[str] = None,
    field: Optional[str] = None,
    output: Optional[str] = None,
    **_,
) -> int:
    """
    Writes the lifted matrix ``[I_n | x]`` of a codeword.

    Example usage from a terminal:
    ::

        rankmetric lift codeword.txt --output lifted.mat
    """
    log.info(f"rankmetric v{__version__} | Lift")
    gab = _load_code(preset, code, field)
    lifted = lift_word(gab, VectorParsers.read(input))
    if output:
        MatrixParsers.write(output, lifted)
        log.info(f"Lifted matrix written to {output}")
    else:
        sys.stdout.write(MatrixParsers.format(lifted))
    return 0


def corrupt(
    input: str,
    preset: str = "g8",
    code: Optional[str] = None,
    field: Optional[str] = None,
    seed: int = 0,
    tau: Optional[int] = None,
    epsilon: int = 0,
    mu: int = 0,
    delta: int = 0,
    output: Optional[str] = None,
    **_,
) -> int:
    """
    Corrupts a codeword. With ``--tau`` an additive error of that rank is added and the
    received word is written; otherwise the codeword is lifted and a received matrix with
    ``epsilon`` errors, ``mu`` erasures and ``delta`` deviations is written. The ground
    truth goes to a JSON sidecar next to the output file.

    Example usage from a terminal:
    ::

        rankmetric corrupt codeword.txt --epsilon 1 --mu 1 --delta 1 --seed 7 --output rx.mat
        rankmetric corrupt codeword.txt --tau 2 --output rx.txt

    Args:
        input (str): Codeword file.
        seed (int): Channel seed.
        tau (int): Rank of an additive error (Gabidulin channel).
        epsilon (int): Errors of the KK channel.
        mu (int): Erasures of the KK channel.
        delta (int): Deviations of the KK channel.
        output (str): Received file; its ``.json`` sidecar holds the ground truth.
    """
    log.info(f"rankmetric v{__version__} | Corrupt")
    gab = _load_code(preset, code, field)
    x = VectorParsers.read(input)
    spec = ChannelSpec(seed=int(seed), epsilon=epsilon, mu=mu, delta=delta, tau=tau)
    received, truth = corrupt_word(gab, x, spec)
    if spec.is_kk:
        record = truth.as_dict()
        if output:
            InstanceSerializer.dump(output, received, record)
        else:
            sys.stdout.write(MatrixParsers.format(received))
    else:
        record = {"x": list(x), "seed": spec.seed, **truth.as_dict()}
        if output:
            InstanceSerializer.dump_word(output, received, record)
        else:
            print(VectorParsers.format(received))
    if output:
        log.info(f"Received {'matrix' if spec.is_kk else 'word'} written to {output}")
    return 0


def _truth_fields(report: dict, truth: dict) -> dict:
    if "x" in truth and report.get("codeword") is not None:
        report["matches_truth"] = report["codeword"] == list(truth["x"])
    return report


def decode(
    input: str,
    preset: str = "g8",
    code: Optional[str] = None,
    field: Optional[str] = None,
    dump_stages: bool = False,
    format: str = "json",
    key_solver: str = "ribma",
    packet_limit: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
    **_,
) -> int:
    """
    Decodes a received word (comma-separated symbols, Gabidulin decoding) or a received
    matrix (KK decoding; a header declaring ``l`` blocks selects Cartesian product
    decoding). The report is printed; a JSON sidecar next to the input, as written by
    ``corrupt``, adds a comparison with the transmitted codeword.

    Example usage from a terminal:
    ::

        rankmetric decode rx.mat --dump-stages --format text

    Args:
        input (str): Received word or matrix file.
        dump_stages (bool): Print the intermediate values of a KK decode.
        format (str): Output format.
        key_solver (str): Key-equation solver of the Gabidulin decoder.
        packet_limit (int): Keep at most this many independent received rows.
        seed (int): Seed of the packet selection.
        workers (int): Threads of the Cartesian product decoder.

    Returns:
        0 if every decode succeeded, 1 otherwise.
    """
    log.info(f"rankmetric v{__version__} | Decode")
    _check_format(format)
    gab = _load_code(preset, code, field)
    truth = InstanceSerializer.load_truth(input)
    stages = None

    if MatrixParsers.sniff(input) == "vector":
        outcome = decode_word(gab, VectorParsers.read(input), key_solver=key_solver)
        reports = [_truth_fields(outcome.as_dict(), truth)]
    else:
        received, blocks = MatrixParsers.read(input)
        kk = KKCode(gab, packet_limit=packet_limit, selection_seed=int(seed))
        if blocks is None or blocks == 1:
            trace = StageTrace() if dump_stages else None
            reports = [_truth_fields(kk_decode(kk, received, trace).as_dict(), truth)]
            stages = trace.lines() if trace is not None else None
        else:
            results = cartesian_decode(kk, received, blocks, workers=workers)
            reports = [dict(block=i, **r.as_dict()) for i, r in enumerate(results)]

    failed = [r for r in reports if not r["success"]]
    for r in failed:
        log.warning(f"Decoding failure: {r['failure']} {r['message']}")

    if format == "json" and stages is not None:
        reports[0]["stages"] = stages
    elif stages is not None:
        sys.stdout.write("".join(line + "\n" for line in stages))
    _emit(reports, format)
    return 1 if failed else 0


def example(dump_stages: bool = False, format: str = "text", **_) -> int:
    """
    Decodes the built-in worked example: a lifted codeword of the ``g8`` code received with
    two erasures and two deviations. With ``--dump-stages`` every intermediate
    value is printed, labelled by decoding step. The reconstruction is then repeated on
    a second basis of the error span (primed labels), which changes X and L but not e.

    Example usage from a terminal:
    ::

        rankmetric example --dump-stages
    """
    log.info(f"rankmetric v{__version__} | Example")
    _check_format(format)
    kk, received, x = worked_example()
    trace = StageTrace()
    report = kk_decode(kk, received, trace)
    record = report.as_dict()
    record["matches_truth"] = report.codeword == tuple(x)
    if dump_stages and report.success:
        trace_on_basis(kk, trace, WORKED_EXAMPLE_BASIS)

    if format == "text":
        if dump_stages:
            sys.stdout.write(trace.to_text())
        else:
            print(f"x_hat = {StageTrace.render(report.codeword)}")
    else:
        if dump_stages and format == "json":
            record["stages"] = trace.lines()
        _emit([record], format)
    if not report.success:
        raise DecodeFailure(report.failure, report.message)
    return 0


def simulate(
    config: Optional[str] = None,
    preset: Optional[str] = None,
    mode: Optional[str] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    format: str = "csv",
    **kwargs,
) -> int:
    """
    Runs a Monte Carlo sweep over error budgets. The results table, the report and the
    resolved configuration are written into the run directory, and the table is printed.

    Example usage from a terminal:
    ::

        rankmetric simulate tutorials/case_a/config.yml --trials 200
        rankmetric simulate --preset g8 --mode kk --trials 100 --seed 3

    Args:
        config (str): Simulation configuration file (YAML). Flags override its values.
        preset (str): Named code, if no configuration file is given.
        mode (str): ``gabidulin`` or ``kk``.
        trials (int): Trials per budget.
        seed (int): Master seed.
        workers (int): Threads running the budget cells.
        format (str): Output format of the printed table.
    """
    log.info(f"rankmetric v{__version__} | Simulate")
    _check_format(format)
    overrides = dict(preset=preset, mode=mode, trials=trials, seed=seed, workers=workers)
    overrides.update({k: kwargs[k] for k in ("key_solver", "packet_limit") if k in kwargs})
    if config:
        sim = Simulation.from_yml(config, **overrides)
    else:
        params = {k: v for k, v in overrides.items() if v is not None}
        params.setdefault("preset", "g8")
        sim = Simulation(name="cli", path=os.getcwd(), **params)
    sim.set_tasks()
    results = sim.run()
    generate_report(sim)

    if format == "csv":
        sys.stdout.write(sim.to_csv())
    else:
        _emit(results.to_dict(orient="records"), format)
    log.info("Finalized")
    return 0


def rankmetric() -> None:
    """
    Entry point for the rankmetric command-line interface (CLI).

    This function parses command-line arguments and executes the appropriate subcommand
    (``code``, ``encode``, ``lift``, ``corrupt``, ``decode``, ``example`` or
    ``simulate``). Decoding failures exit with status 1, malformed input with status 2.

    Example usage from a terminal:
    ::

        rankmetric example --dump-stages
    """
    parser = argparse.ArgumentParser(argument_default=argparse.SUPPRESS)
    parser.add_argument(
        "func",
        type=str,
        choices=["code", "encode", "lift", "corrupt", "decode", "example", "simulate"],
        help="Subcommand to run",
    )
    parser.add_argument(
        "input", type=str, nargs="?", help="Input file (message, codeword, received or config)"
    )
    parser.add_argument("--preset", type=str, help="Named code: g4, g8 or g16")
    parser.add_argument("--code", type=str, help="YAML file with explicit code parameters")
    parser.add_argument("--field", type=str, help="Field record file: m, modulus and basis")
    parser.add_argument("--seed", type=int, help="Seed of the channel or simulation")
    parser.add_argument("--trials", type=int, help="Trials per budget")
    parser.add_argument("--mode", type=str, choices=["gabidulin", "kk"], help="Simulation mode")
    parser.add_argument("--workers", type=int, help="Worker threads")
    parser.add_argument("--tau", type=int, help="Rank of an additive error")
    parser.add_argument("--epsilon", type=int, help="Errors of the KK channel")
    parser.add_argument("--mu", type=int, help="Erasures of the KK channel")
    parser.add_argument("--delta", type=int, help="Deviations of the KK channel")
    parser.add_argument("--packet-limit", type=int, help="Received rows kept before decoding")
    parser.add_argument(
        "--key-solver", type=str, choices=["ribma", "ibma"], help="Key-equation solver"
    )
    parser.add_argument("-o", "--output", type=str, help="Output file")
    parser.add_argument(
        "--dump-stages",
        action="store_true",
        help="Print the intermediate values of the decoder",
    )
    parser.add_argument("--format", type=str, choices=list(FORMATS), help="Output format")
    parser.add_argument(
        "-d",
        "--debug",
        action="store_true",
        help="Set the logging level to DEBUG for console output.",
    )
    args = parser.parse_args()

    if hasattr(args, "debug") and args.debug:
        set_console_log_level("DEBUG")
    if hasattr(args, "input") and args.input is None:
        args.__delattr__("input")
    if args.func == "simulate" and hasattr(args, "input"):
        args.config = args.input
        args.__delattr__("input")
    if args.func in ("encode", "lift", "corrupt", "decode") and not hasattr(args, "input"):
        parser.error(f"{args.func} needs an input file")

    try:
        func = globals()[args.func]
        args.__delattr__("func")
    except AttributeError:
        raise AttributeError("Function not implemented")

    try:
        status = func(**vars(args))
    except DecodeFailure as failure:
        log.error(f"Decoding failure: {failure}")
        status = 1
    except (ValueError, OSError, KeyError) as error:
        log.error(str(error))
        status = 2
    sys.exit(status)
