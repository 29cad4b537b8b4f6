"""Plain-text configuration for the command-line tools.

Versioned key=value format. A file starts with the header line
"quatquad-config 1" and contains [polynomial], [job NAME], [output]
and [bench] sections. The polynomial is given either by coefficients
{b, c} or by roots {alpha, beta}, never both. parse/serialize round-trip
exactly: floats are written with repr and quaternions with the exact
formatter, so parse(serialize(cfg)) == cfg.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .iterfun import IterationMethod
from .qpoly import QuadraticPoly, from_roots
from .quat import (ParseError, Quaternion, format_quaternion,
                   parse_quaternion)
from .render import HybridSchedule, PALETTES, RenderJob, Tracing

__all__ = [
    "HEADER",
    "JobSpec",
    "OutputSpec",
    "BenchSpec",
    "Config",
    "parse_config",
    "serialize_config",
    "load_config",
]

HEADER = "quatquad-config 1"


@dataclass(frozen=True)
class JobSpec:
    name: str
    tracing: Tracing = Tracing.QUATERNION
    method: IterationMethod = IterationMethod.LEFT_NEWTON
    center: tuple = (0.0, 0.0)
    halfwidth: float = None
    resolution: int = 1024
    stop_tol: float = 0.01
    cap: int = 70
    cycle_check: bool = True
    plane_root: int = 0
    schedule: HybridSchedule = HybridSchedule.LIFT_EVERY_STEP
    palette: str = "default"

    def to_render_job(self, P: QuadraticPoly) -> RenderJob:
        return RenderJob(P, self.method, self.tracing, self.center,
                         self.halfwidth, self.resolution, self.stop_tol,
                         self.cap, self.cycle_check, self.plane_root,
                         self.schedule, palette=self.palette)


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    png: bool = False
    metadata: bool = True


@dataclass(frozen=True)
class BenchSpec:
    repetitions: int = 3
    resolution: int = 100
    workers: int = 1


@dataclass(frozen=True)
class Config:
    b: Quaternion = None
    c: Quaternion = None
    alpha: Quaternion = None
    beta: Quaternion = None
    jobs: tuple = ()
    output: OutputSpec = OutputSpec()
    bench: BenchSpec = BenchSpec()

    def polynomial(self) -> QuadraticPoly:
        if self.b is not None:
            return QuadraticPoly(self.b, self.c)
        return from_roots(self.alpha, self.beta)


def _parse_bool(value, line):
    low = value.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"line {line}: expected a boolean, got {value!r}")


def _parse_float(value, line):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"line {line}: expected a number, got {value!r}")


def _parse_int(value, line):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"line {line}: expected an integer, got {value!r}")


def _parse_quat(value, line):
    try:
        return parse_quaternion(value)
    except ParseError as exc:
        raise ConfigError(f"line {line}: {exc}")


def _parse_center(value, line):
    parts = value.split()
    if len(parts) != 2:
        raise ConfigError(f"line {line}: center wants two numbers")
    return (_parse_float(parts[0], line), _parse_float(parts[1], line))


def _parse_enum(enum_cls, value, line):
    try:
        return enum_cls(value)
    except ValueError:
        names = ", ".join(m.value for m in enum_cls)
        raise ConfigError(f"line {line}: expected one of {names}, "
                          f"got {value!r}")


def parse_config(text: str) -> Config:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ConfigError(f"line 1: missing header {HEADER!r}")
    poly = {}
    poly_lines = {}
    jobs = []
    out_kw = {}
    bench_kw = {}
    section = None
    job_kw = None

    def finish_job():
        if job_kw is not None:
            jobs.append(JobSpec(**job_kw))

    for n, raw in enumerate(lines[1:], start=2):
        text_line = raw.strip()
        if not text_line or text_line.startswith("#"):
            continue
        if text_line.startswith("["):
            if not text_line.endswith("]"):
                raise ConfigError(f"line {n}: unterminated section header")
            head = text_line[1:-1].strip()
            finish_job()
            job_kw = None
            if head == "polynomial":
                section = "polynomial"
            elif head == "output":
                section = "output"
            elif head == "bench":
                section = "bench"
            elif head.startswith("job"):
                name = head[3:].strip()
                if not name:
                    raise ConfigError(f"line {n}: job section needs a name")
                section = "job"
                job_kw = {"name": name}
            else:
                raise ConfigError(f"line {n}: unknown section [{head}]")
            continue
        if "=" not in text_line:
            raise ConfigError(f"line {n}: expected key = value")
        key, _, value = text_line.partition("=")
        key = key.strip()
        value = value.strip()
        if section is None:
            raise ConfigError(f"line {n}: key outside any section")
        if section == "polynomial":
            if key not in ("b", "c", "alpha", "beta"):
                raise ConfigError(f"line {n}: unknown polynomial key {key!r}")
            if key in poly:
                raise ConfigError(f"line {n}: duplicate key {key!r}")
            poly[key] = _parse_quat(value, n)
            poly_lines[key] = n
        elif section == "job":
            if key == "tracing":
                job_kw["tracing"] = _parse_enum(Tracing, value, n)
            elif key == "method":
                job_kw["method"] = _parse_enum(IterationMethod, value, n)
            elif key == "center":
                job_kw["center"] = _parse_center(value, n)
            elif key == "halfwidth":
                job_kw["halfwidth"] = _parse_float(value, n)
            elif key == "resolution":
                job_kw["resolution"] = _parse_int(value, n)
            elif key == "stop_tol":
                job_kw["stop_tol"] = _parse_float(value, n)
            elif key == "cap":
                job_kw["cap"] = _parse_int(value, n)
            elif key == "cycle_check":
                job_kw["cycle_check"] = _parse_bool(value, n)
            elif key == "plane_root":
                job_kw["plane_root"] = _parse_int(value, n)
            elif key == "schedule":
                job_kw["schedule"] = _parse_enum(HybridSchedule, value, n)
            elif key == "palette":
                if value not in PALETTES:
                    raise ConfigError(f"line {n}: unknown palette {value!r}")
                job_kw["palette"] = value
            else:
                raise ConfigError(f"line {n}: unknown job key {key!r}")
        elif section == "output":
            if key == "directory":
                out_kw["directory"] = value
            elif key == "png":
                out_kw["png"] = _parse_bool(value, n)
            elif key == "metadata":
                out_kw["metadata"] = _parse_bool(value, n)
            else:
                raise ConfigError(f"line {n}: unknown output key {key!r}")
        elif section == "bench":
            if key == "repetitions":
                bench_kw["repetitions"] = _parse_int(value, n)
            elif key == "resolution":
                bench_kw["resolution"] = _parse_int(value, n)
            elif key == "workers":
                bench_kw["workers"] = _parse_int(value, n)
            else:
                raise ConfigError(f"line {n}: unknown bench key {key!r}")
    finish_job()

    has_bc = "b" in poly or "c" in poly
    has_roots = "alpha" in poly or "beta" in poly
    if has_bc and has_roots:
        n = max(poly_lines.values())
        raise ConfigError(f"line {n}: give either b,c or alpha,beta, "
                          "not a mixture")
    if has_bc and ("b" not in poly or "c" not in poly):
        raise ConfigError("polynomial section needs both b and c")
    if has_roots and ("alpha" not in poly or "beta" not in poly):
        raise ConfigError("polynomial section needs both alpha and beta")
    if not has_bc and not has_roots:
        raise ConfigError("polynomial section missing or empty")
    return Config(poly.get("b"), poly.get("c"), poly.get("alpha"),
                  poly.get("beta"), tuple(jobs), OutputSpec(**out_kw),
                  BenchSpec(**bench_kw))


def serialize_config(cfg: Config) -> str:
    lines = [HEADER, "", "[polynomial]"]
    if cfg.b is not None:
        lines.append(f"b = {format_quaternion(cfg.b)}")
        lines.append(f"c = {format_quaternion(cfg.c)}")
    else:
        lines.append(f"alpha = {format_quaternion(cfg.alpha)}")
        lines.append(f"beta = {format_quaternion(cfg.beta)}")
    for job in cfg.jobs:
        lines.append("")
        lines.append(f"[job {job.name}]")
        lines.append(f"tracing = {job.tracing.value}")
        lines.append(f"method = {job.method.value}")
        lines.append(f"center = {job.center[0]!r} {job.center[1]!r}")
        if job.halfwidth is not None:
            lines.append(f"halfwidth = {job.halfwidth!r}")
        lines.append(f"resolution = {job.resolution}")
        lines.append(f"stop_tol = {job.stop_tol!r}")
        lines.append(f"cap = {job.cap}")
        lines.append(f"cycle_check = {'true' if job.cycle_check else 'false'}")
        lines.append(f"plane_root = {job.plane_root}")
        lines.append(f"schedule = {job.schedule.value}")
        lines.append(f"palette = {job.palette}")
    lines.append("")
    lines.append("[output]")
    lines.append(f"directory = {cfg.output.directory}")
    lines.append(f"png = {'true' if cfg.output.png else 'false'}")
    lines.append(f"metadata = {'true' if cfg.output.metadata else 'false'}")
    lines.append("")
    lines.append("[bench]")
    lines.append(f"repetitions = {cfg.bench.repetitions}")
    lines.append(f"resolution = {cfg.bench.resolution}")
    lines.append(f"workers = {cfg.bench.workers}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> Config:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}")
    return parse_config(text)
