import pytest

from quatquad import (
    BenchSpec,
    Config,
    ConfigError,
    IterationMethod,
    JobSpec,
    Quaternion,
    Tracing,
    load_config,
    parse_config,
    serialize_config,
)

MINIMAL = """\
quatquad-config 1

[polynomial]
b = 0.1-2.6664i-0.5611j-0.0741k
c = -2.9569+2.0171i+0.71178j-1.658k
"""


def test_parse_minimal():
    cfg = parse_config(MINIMAL)
    assert cfg.b == Quaternion(0.1, -2.6664, -0.5611, -0.0741)
    assert cfg.alpha is None
    assert cfg.jobs == ()
    assert cfg.output.directory == "out"
    assert cfg.bench.repetitions == 3


def test_parse_root_form_builds_polynomial():
    text = """\
quatquad-config 1
[polynomial]
alpha = -1.3+2.1i+0.17j-0.31k
beta = 1.4+0.7i-0.23j+0.28k
"""
    cfg = parse_config(text)
    P = cfg.polynomial()
    assert P.eval(cfg.alpha).norm() < 1e-9
    assert P.eval(cfg.beta).norm() < 1e-9


def test_parse_job_section():
    text = MINIMAL + """
[job plane_run]
tracing = invariant_plane
method = halley
resolution = 64
cycle_check = false
plane_root = 1
"""
    cfg = parse_config(text)
    assert len(cfg.jobs) == 1
    job = cfg.jobs[0]
    assert job.name == "plane_run"
    assert job.tracing is Tracing.INVARIANT_PLANE
    assert job.method is IterationMethod.HALLEY
    assert job.resolution == 64
    assert job.cycle_check is False
    assert job.plane_root == 1
    render_job = job.to_render_job(cfg.polynomial())
    assert render_job.resolution == 64


def test_parse_output_and_bench():
    text = MINIMAL + """
[output]
directory = frames
png = true

[bench]
repetitions = 5
resolution = 40
workers = 2
"""
    cfg = parse_config(text)
    assert cfg.output.directory == "frames"
    assert cfg.output.png is True
    assert cfg.output.metadata is True
    assert cfg.bench == BenchSpec(repetitions=5, resolution=40, workers=2)


def test_comments_and_blank_lines():
    text = """\
quatquad-config 1
# a comment
[polynomial]

# another
b = 1.0+0.0i+0.0j+0.0k
c = -1.0+0.0i+0.0j+0.0k
"""
    cfg = parse_config(text)
    assert cfg.b == Quaternion(1.0)


def test_round_trip_identity():
    cfg = Config(
        alpha=Quaternion(-1.3, 2.1, 0.17, -0.31),
        beta=Quaternion(1.4, 0.7, -0.23, 0.28),
        jobs=(JobSpec("a", tracing=Tracing.COMPLEX_PROJECTION, resolution=17,
                      halfwidth=1.75, stop_tol=1e-05),
              JobSpec("b", tracing=Tracing.HYBRID, cap=99)),
    )
    text = serialize_config(cfg)
    again = parse_config(text)
    assert again == cfg
    # Serialization is a fixed point.
    assert serialize_config(again) == text


def test_missing_header():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("[polynomial]\nb = 1.0+0.0i+0.0j+0.0k\n")


def test_unknown_section():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("quatquad-config 1\n[palette]\n")


def test_key_outside_section():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("quatquad-config 1\nb = 1.0+0.0i+0.0j+0.0k\n")


def test_unknown_key():
    text = MINIMAL + "\n[output]\ncolor = blue\n"
    with pytest.raises(ConfigError, match="color"):
        parse_config(text)


def test_bad_quaternion_value():
    text = "quatquad-config 1\n[polynomial]\nb = one+2i\n"
    with pytest.raises(ConfigError, match="line 3"):
        parse_config(text)


def test_bad_bool_value():
    text = MINIMAL + "\n[output]\npng = maybe\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_duplicate_polynomial_key():
    text = MINIMAL + "b = 1.0+0.0i+0.0j+0.0k\n"
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(text)


def test_mixed_coefficient_and_root_forms_rejected():
    text = MINIMAL + "alpha = 1.0+0.0i+0.0j+0.0k\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_incomplete_pair_rejected():
    text = "quatquad-config 1\n[polynomial]\nb = 1.0+0.0i+0.0j+0.0k\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_unknown_palette_rejected():
    text = MINIMAL + "\n[job x]\npalette = neon\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nope.cfg"))


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "demo.cfg"
    path.write_text(MINIMAL)
    cfg = load_config(str(path))
    assert cfg.c == Quaternion(-2.9569, 2.0171, 0.71178, -1.658)
