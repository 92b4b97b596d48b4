"""Batch front-end: seeded runs of each engine with bit-exact emission.

Subcommands ``epr``, ``holo``, ``cavity``, ``evolve`` and ``hj`` share the
flags ``--config``, ``--seed``, ``--out`` and ``--format``.  A config file
is flat UTF-8 text, one ``key = value`` per line with ``#`` comments; keys
are the long flag names and flags override the file.  Identical
(config, seed) pairs produce byte-identical output: reals are printed
with 17 significant digits, CSV uses '.' decimals and '\\n' newlines, and
every RNG stream is derived from the master seed (see ``seeding``).

Exit codes: 0 success, 1 engine or I/O failure, 2 usage/config errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import cavity, epr, hj, holography, statespace

PROG = "phasorlab"


class ConfigError(ValueError):
    """Bad or unknown configuration key/value; maps to exit code 2."""


# ---------------------------------------------------------------------------
# option schemas: key -> (converter name, default string, help)

def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip() != ""]


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip() != ""]


def _complexes(s: str) -> list[complex]:
    return [complex(x.replace(" ", "")) for x in s.split(",") if x.strip() != ""]


def _sweep(s: str) -> list[float]:
    """Either a single number or an inclusive 'start:stop:count' sweep."""
    if ":" in s:
        start, stop, count = s.split(":")
        n = int(count)
        if n < 1:
            raise ValueError("sweep count must be >= 1")
        return list(np.linspace(float(start), float(stop), n))
    return [float(s)]


def _interval(s: str) -> tuple[float, float]:
    lo, hi = s.split(":")
    return float(lo), float(hi)


def _choice(*options: str):
    def convert(s: str) -> str:
        if s not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return s
    return convert


def _u64(s: str) -> int:
    value = int(s)
    if not (0 <= value < 2 ** 64):
        raise ValueError("must fit in an unsigned 64-bit integer")
    return value


COMMON_OPTIONS = {
    "seed": (_u64, "0", "master seed (unsigned 64-bit)"),
    "out": (str, None, "output path (default: stdout)"),
    "format": (_choice("csv", "json"), "csv", "output format"),
}

SUBCOMMAND_OPTIONS = {
    "epr": {
        "theta1": (_sweep, "0", "detector-1 analyzer angle(s), degrees; N or start:stop:count"),
        "theta2": (_sweep, "0", "detector-2 analyzer angle(s), degrees; N or start:stop:count"),
        "parity": (_choice("plus", "minus"), "plus", "pair parity"),
        "field-scale": (float, "1.0", "per-photon field amplitude E"),
        "convention": (_choice("sum", "difference"), "sum",
                       "correlation angle convention (detector-2 handedness)"),
        "mode": (_choice("symbolic", "numeric"), "symbolic", "amplitude evaluation path"),
    },
    "holo": {
        "base-wavelength": (float, "1.0", "wavelength of harmonic channel 1"),
        "channels": (_ints, "1", "harmonic channel indices, comma separated"),
        "detectors": (_floats, "0.0", "detector positions, comma separated"),
        "source": (float, "2.3", "true source position"),
        "sources": (_floats, None, "per-channel source override (bit generation)"),
        "alpha": (float, "0.0", "shared phase offset, radians"),
        "domain": (_interval, "0:10", "search domain lo:hi"),
    },
    "cavity": {
        "hf-over-kt": (_floats, None, "dimensionless lobe energies (h=k_B=T=1)"),
        "frequencies": (_floats, None, "mode family base frequencies, Hz"),
        "temperature": (float, "1.0", "bath temperature"),
        "planck-h": (float, "1.0", "Planck constant"),
        "boltzmann-k": (float, "1.0", "Boltzmann constant"),
        "steps": (int, "100000", "Metropolis steps per chain"),
        "burn-in": (int, "10000", "discarded leading steps"),
    },
    "evolve": {
        "coefficients": (_complexes, "1,0,1", "a_0..a_n, ascending"),
        "initial": (_complexes, "1,0", "psi, psi', ... at t=0"),
        "t-final": (float, "6.283185307179586", "integration end time"),
        "step": (float, "0.001", "fixed RK4 step"),
        "every": (int, "1", "emit every Nth sample"),
    },
    "hj": {
        "system": (_choice("free", "linear"), "free", "principal-function family"),
        "momentum": (float, "1.0", "free-particle momentum"),
        "mass": (float, "1.0", "particle mass"),
        "hbar": (float, "1.0", "action scale"),
        "alpha": (float, "0.5", "linear potential slope"),
        "energy": (float, "10.0", "total energy (linear system)"),
        "q-min": (float, "0.0", "grid start"),
        "q-max": (float, "1.0", "grid end"),
        "points": (int, "201", "grid size"),
        "time": (float, "0.0", "evaluation time"),
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="classical-wave simulation batch runner")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, schema in SUBCOMMAND_OPTIONS.items():
        sub = subs.add_parser(name, help=f"run the {name} engine")
        sub.add_argument("--config", default=None, metavar="PATH",
                         help="flat 'key = value' config file; flags override it")
        for key, (_, default, help_text) in {**schema, **COMMON_OPTIONS}.items():
            shown = f" (default: {default})" if default is not None else ""
            sub.add_argument(f"--{key}", default=None, metavar="V",
                             help=help_text + shown)
    return parser


# ---------------------------------------------------------------------------
# config handling

def parse_config_text(text: str) -> dict[str, str]:
    """Flat 'key = value' lines; '#' starts a comment; blank lines ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def serialize_config(values: dict[str, str]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in sorted(values.items()))


def resolve_options(command: str, namespace: argparse.Namespace) -> dict:
    """Merge config file and flags into typed values (flags win)."""
    schema = {**SUBCOMMAND_OPTIONS[command], **COMMON_OPTIONS}
    file_values: dict[str, str] = {}
    if namespace.config is not None:
        try:
            with open(namespace.config, "r", encoding="utf-8") as fh:
                file_values = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        for key in file_values:
            if key not in schema:
                raise ConfigError(f"unknown config key '{key}' for subcommand '{command}'")

    resolved = {}
    for key, (convert, default, _) in schema.items():
        raw = getattr(namespace, key.replace("-", "_"))
        if raw is None:
            raw = file_values.get(key, default)
        if raw is None:
            resolved[key] = None
            continue
        try:
            resolved[key] = convert(raw) if isinstance(raw, str) else raw
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for key '{key}': {exc}") from exc
    return resolved


# ---------------------------------------------------------------------------
# emission

def format_real(x: float) -> str:
    return "%.17g" % x


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format_real(float(v))


def render_table(header: list[str], rows: list[list], fmt: str) -> str:
    """CSV (17-significant-digit reals, '\\n' newlines) or mirrored JSON."""
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_format_cell(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    payload = [{k: (int(v) if isinstance(v, (bool, int, np.integer)) else float(v))
                for k, v in zip(header, row)} for row in rows]
    return json.dumps(payload, indent=1) + "\n"


def write_output(text: str, path: str | None) -> int:
    """Write UTF-8 bytes to the path or stdout; returns bytes written."""
    data = text.encode("utf-8")
    if path is None:
        sys.stdout.write(text)
        return len(data)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


# ---------------------------------------------------------------------------
# engine glue

def run_epr(opts: dict) -> tuple[list[str], list[list]]:
    pair = epr.PhotonPairState(opts["parity"], opts["field-scale"])
    header = ["theta1_deg", "theta2_deg", "E", "P_xx", "P_xy", "P_yx", "P_yy"]
    rows = []
    for t1_deg in opts["theta1"]:
        for t2_deg in opts["theta2"]:
            t1, t2 = math.radians(t1_deg), math.radians(t2_deg)
            probs = epr.joint_probabilities(t1, t2, pair, mode=opts["mode"],
                                            convention=opts["convention"])
            corr = float(probs[0, 0] + probs[1, 1] - probs[0, 1] - probs[1, 0])
            rows.append([t1_deg, t2_deg, corr,
                         float(probs[0, 0]), float(probs[0, 1]),
                         float(probs[1, 0]), float(probs[1, 1])])
    return header, rows


def _holo_setup(opts: dict):
    channels = [holography.FrequencyChannel.harmonic(j, opts["base-wavelength"])
                for j in opts["channels"]]
    sources = opts["sources"]
    if sources is not None and len(sources) != len(channels):
        raise ConfigError("key 'sources' must list one position per channel")
    bits = []
    for ci, channel in enumerate(channels):
        z_s = opts["source"] if sources is None else sources[ci]
        for z_d in opts["detectors"]:
            bits.append(holography.forward_bit(z_s, z_d, channel, opts["alpha"]))
    return channels, bits


def run_holo_csv(opts: dict) -> tuple[list[str], list[list]]:
    channels, _ = _holo_setup(opts)
    domain = opts["domain"]
    header = ["n_channels", "alias_measure", "density"]
    rows = []
    for k in range(1, len(channels) + 1):
        subset = channels[:k]
        sub_opts = dict(opts, channels=[c.index for c in subset])
        if opts["sources"] is not None:
            sub_opts["sources"] = opts["sources"][:k]
        _, bits = _holo_setup(sub_opts)
        result = holography.localize(bits, subset, opts["alpha"], domain)
        length = domain[1] - domain[0]
        rows.append([k, result.measure, result.measure / length])
    return header, rows


def run_holo_json(opts: dict) -> str:
    channels, bits = _holo_setup(opts)
    domain = opts["domain"]
    result = holography.localize(bits, channels, opts["alpha"], domain)
    payload = {
        "domain": [domain[0], domain[1]],
        "alpha": opts["alpha"],
        "channels": [c.index for c in channels],
        "detectors": list(opts["detectors"]),
        "source": opts["source"],
        "bits": [{"detector": b.detector_position, "channel": b.channel_index,
                  "parity": b.parity} for b in bits],
        "intervals": [[lo, hi] for lo, hi in result.intervals],
        "measure": result.measure,
        "density": result.measure / (domain[1] - domain[0]),
        "granularity": result.granularity,
        "contains_source": result.contains(opts["source"]),
    }
    return json.dumps(payload, indent=1) + "\n"


def run_cavity(opts: dict) -> tuple[list[str], list[list]]:
    ratios, freqs = opts["hf-over-kt"], opts["frequencies"]
    if (ratios is None) == (freqs is None):
        raise ConfigError("provide exactly one of keys 'hf-over-kt' and 'frequencies'")
    if ratios is not None:
        bath = cavity.ThermalBath(1.0, 1.0, 1.0)
        freqs = ratios
    else:
        bath = cavity.ThermalBath(opts["temperature"], opts["boltzmann-k"],
                                  opts["planck-h"])
    rows_out = cavity.spectrum_sweep(freqs, bath, opts["steps"], opts["burn-in"],
                                     opts["seed"])
    header = ["f", "T", "mc_mean_energy", "mc_stderr", "closed_form",
              "rel_error", "acceptance_rate", "steps", "seed"]
    return header, [[r.frequency, bath.temperature, r.mc_mean_energy, r.mc_stderr,
                     r.closed_form, r.relative_error, r.acceptance_rate,
                     r.steps, opts["seed"]] for r in rows_out]


def run_evolve(opts: dict) -> tuple[list[str], list[list]]:
    spec = statespace.EvolutionSpec(tuple(opts["coefficients"]))
    initial = np.asarray(opts["initial"], dtype=complex)
    traj = statespace.evolve_linear(spec, initial, opts["t-final"], opts["step"])
    n = spec.order
    header = ["t"]
    for k in range(n):
        header += [f"re_{k}", f"im_{k}"]
    header.append("norm")
    rows = []
    for i in range(0, traj.times.size, max(1, opts["every"])):
        state = traj.states[i]
        row = [float(traj.times[i])]
        for k in range(n):
            row += [float(state[k].real), float(state[k].imag)]
        row.append(float(np.linalg.norm(state)))
        rows.append(row)
    return header, rows


def run_hj(opts: dict) -> tuple[list[str], list[list]]:
    q = np.linspace(opts["q-min"], opts["q-max"], opts["points"])
    m, hbar = opts["mass"], opts["hbar"]
    if opts["system"] == "free":
        grid = hj.free_particle_S(opts["momentum"], m, q, opts["time"])
        potential = np.zeros_like(q)
    else:
        grid = hj.linear_potential_S(opts["alpha"], opts["energy"], m, q, opts["time"])
        potential = opts["alpha"] * q
    system = hj.MechanicalSystem(m, potential, hbar)
    res = hj.hjs_residual(grid, system)
    bcp = hj.bcp_ratio(grid, system)
    header = ["q", "lhs_re", "rhs_re", "rhs_im", "bcp_ratio", "regime_flag"]
    rows = [[float(res.q[i]), float(res.lhs[i]), float(res.rhs[i].real),
             float(res.rhs[i].imag), float(bcp.ratio[i]), bool(bcp.classical[i])]
            for i in range(res.q.size)]
    return header, rows


ENGINE_ERRORS = (
    holography.InconsistentBitsError,
    holography.EmptyDomainError,
    epr.DegenerateStateError,
    epr.DetectorUsageError,
    statespace.StabilityError,
    statespace.DegenerateOrderError,
    hj.GridTooSmallError,
    hj.GridTooCoarseError,
    hj.TurningPointError,
    ValueError,
)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        opts = resolve_options(namespace.command, namespace)
    except ConfigError as exc:
        print(f"{PROG}: config error: {exc}", file=sys.stderr)
        return 2

    try:
        if namespace.command == "holo" and opts["format"] == "json":
            text = run_holo_json(opts)
        else:
            runner = {"epr": run_epr, "holo": run_holo_csv, "cavity": run_cavity,
                      "evolve": run_evolve, "hj": run_hj}[namespace.command]
            header, rows = runner(opts)
            text = render_table(header, rows, opts["format"])
    except ConfigError as exc:
        print(f"{PROG}: config error: {exc}", file=sys.stderr)
        return 2
    except ENGINE_ERRORS as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1

    try:
        write_output(text, opts["out"])
    except OSError as exc:
        print(f"{PROG}: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
