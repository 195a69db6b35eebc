import warnings

import numpy as np
import pytest

from persnorm.datasets import (
    FIXTURE_LABELS,
    MomentTargets,
    UnknownLabelWarning,
    default_bundle,
    fixture_path,
    gen_normal,
    load_tsv,
    moment_violations,
    shared_moments,
    write_tsv,
)
from persnorm.errors import (
    DegenerateSampleError,
    EmptyBundleError,
    MissingInputError,
    ParseError,
)
from persnorm.stats import pearson, sample_sd


def test_bundled_fixtures(fixtures):
    assert sorted(fixtures.labels) == sorted(FIXTURE_LABELS)
    assert all(c.n == 142 for c in fixtures.clouds())
    lines = fixture_path().read_text().splitlines()
    assert lines[0] == "dataset\tx\ty"
    assert len(lines) == 1 + 13 * 142


def test_rows_keep_file_order(fixtures):
    first = fixture_path().read_text().splitlines()[1].split("\t")
    assert first[0] == "dino"
    assert fixtures["dino"].points[0].tolist() == [float(first[1]), float(first[2])]


def test_shared_moment_contract(fixtures, normal):
    for c in [*fixtures.clouds(), normal]:
        assert moment_violations(c) == [], c.label


def test_header_only_file(tmp_path):
    p = tmp_path / "h.tsv"
    p.write_text("dataset\tx\ty\n")
    with pytest.raises(EmptyBundleError):
        load_tsv(p)


def test_non_numeric_coordinate_names_the_line(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("dataset\tx\ty\ndino\t1\t2\ndino\tabc\t3\n")
    with pytest.raises(ParseError) as info:
        load_tsv(p)
    assert info.value.line == 3
    assert ":3:" in str(info.value)


def test_wrong_field_count_and_header(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("dataset\tx\ty\ndino\t1\n")
    with pytest.raises(ParseError) as info:
        load_tsv(p)
    assert info.value.line == 2
    p.write_text("name,x,y\ndino,1,2\n")
    with pytest.raises(ParseError):
        load_tsv(p)


def test_unknown_label_warns(tmp_path):
    p = tmp_path / "u.tsv"
    p.write_text("dataset\tx\ty\nmystery\t1\t2\nmystery\t2\t3\nnormal\t0\t0\n")
    with pytest.warns(UnknownLabelWarning, match="mystery"):
        bundle = load_tsv(p)
    assert bundle.labels == ["mystery", "normal"]


def test_known_labels_do_not_warn(tmp_path, fixtures):
    p = tmp_path / "n.tsv"
    write_tsv(fixtures.subset(["dino", "star"]), p)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        load_tsv(p)


def test_filter(fixtures):
    bundle = load_tsv(fixture_path(), "circle")
    assert bundle.labels == ["circle"]
    assert bundle["circle"] == fixtures["circle"]
    assert load_tsv(fixture_path(), ["star", "dino"]).labels == ["dino", "star"]
    with pytest.raises(EmptyBundleError):
        load_tsv(fixture_path(), "triceratops")


def test_missing_file(tmp_path):
    with pytest.raises(MissingInputError, match="nope.tsv"):
        load_tsv(tmp_path / "nope.tsv")


def test_round_trip(tmp_path, fixtures, normal):
    bundle = fixtures.with_cloud(normal)
    p = tmp_path / "all.tsv"
    write_tsv(bundle, p)
    back = load_tsv(p)
    assert back.labels == bundle.labels
    for label in bundle:
        assert back[label] == bundle[label]
    # a second write is byte-identical
    q = tmp_path / "again.tsv"
    write_tsv(back, q)
    assert p.read_bytes() == q.read_bytes()


@pytest.mark.parametrize("seed", [0, 1, 42, 99, 12345])
def test_generated_moments_are_exact(seed):
    c = gen_normal(seed)
    m = shared_moments(c)
    assert c.n == 142
    assert m.mean1 == pytest.approx(54.27, abs=1e-9)
    assert m.mean2 == pytest.approx(47.84, abs=1e-9)
    assert m.sd1 == pytest.approx(16.77, abs=1e-9)
    assert m.sd2 == pytest.approx(26.94, abs=1e-9)
    assert m.rho == pytest.approx(-0.064, abs=1e-9)


def test_generation_is_deterministic():
    assert gen_normal(42) == gen_normal(42)
    a, b = gen_normal(1), gen_normal(2)
    assert not np.array_equal(a.points, b.points)
    assert sample_sd(a.x1.tolist()) == pytest.approx(sample_sd(b.x1.tolist()), abs=1e-9)
    assert pearson(a) == pytest.approx(pearson(b), abs=1e-9)


def test_custom_targets_and_size():
    t = MomentTargets(0.0, 10.0, 1.0, 2.0, 0.5)
    c = gen_normal(3, n=30, targets=t, label="custom")
    m = shared_moments(c)
    assert (c.label, c.n) == ("custom", 30)
    assert (m.mean1, m.mean2, m.sd1, m.sd2, m.rho) == pytest.approx((0.0, 10.0, 1.0, 2.0, 0.5), abs=1e-9)


def test_generation_preconditions():
    with pytest.raises(DegenerateSampleError):
        gen_normal(1, n=2)
    with pytest.raises(DegenerateSampleError):
        gen_normal(1, targets=MomentTargets(rho=1.0))


def test_default_bundle_appends_normal(fixtures):
    bundle = default_bundle()
    assert bundle.labels == fixtures.labels + ["normal"]
    assert bundle["normal"] == gen_normal(42)
