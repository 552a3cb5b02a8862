import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from extropy_ratios import AmbiguousAnchorsError, DegenerateInputError, ImageFormatError, Kind
from extropy_ratios.images import (
    UNMATCHED,
    GrayscaleImage,
    classification_csv,
    classify,
    image_similarity,
    load_image,
    save_csv,
    save_pgm,
    scale_exposure,
    similarity_to_reference,
    synthetic_image,
)

QUAD = GrayscaleImage([[0.25, 0.5], [0.75, 1.0]])

images = arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(2, 12)),
                elements=st.floats(0, 1)).filter(lambda a: a.max() > 1e-3)


def test_reference_similarity_hand_value():
    # grid 0,.25,.5,.75,1: cross -0.3125, J_s(img) -0.234375, J_s(ref) -0.5
    assert similarity_to_reference(QUAD) == pytest.approx(5 / 6, abs=1e-12)


@pytest.mark.parametrize("c", [0.25, 0.5, 0.75])
def test_reference_similarity_exposure_invariant(c):
    assert similarity_to_reference(scale_exposure(QUAD, c)) == pytest.approx(5 / 6, rel=1e-12)


def test_black_image_rejected():
    with pytest.raises(DegenerateInputError):
        similarity_to_reference(GrayscaleImage(np.zeros((2, 2))))


def test_image_validation():
    with pytest.raises(ValueError):
        GrayscaleImage([[0.1, 1.2], [0.0, 0.0]])
    with pytest.raises(ValueError):
        GrayscaleImage([0.1, 0.2, 0.3, 0.4])
    with pytest.raises(ValueError):
        scale_exposure(QUAD, 1.5)


def test_pairwise_similarity_hand_value():
    b = GrayscaleImage([[0.0, 0.5], [0.5, 1.0]])
    # pooled grid 0,.25,.5,.5,.5,.75,1,1 : survival sums
    z = np.sort(np.r_[QUAD.pixels.ravel(), b.pixels.ravel()])
    gaps = np.diff(z)
    sa = np.array([(QUAD.pixels.ravel() > v).mean() for v in z[:-1]])
    sb = np.array([(b.pixels.ravel() > v).mean() for v in z[:-1]])
    expected = np.dot(sa * sb, gaps) ** 2 / (np.dot(sa * sa, gaps) * np.dot(sb * sb, gaps))
    assert image_similarity(QUAD, b, Kind.SURVIVAL) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_pairwise_exposure_invariance(kind):
    a, b = synthetic_image(1), synthetic_image(2, shape=4.0)
    base = image_similarity(a, b, kind)
    for c in (0.25, 0.5, 0.75):
        assert image_similarity(scale_exposure(a, c), scale_exposure(b, c), kind) == pytest.approx(base, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(px=images, c=st.floats(1e-3, 1.0))
def test_reference_invariance_property(px, c):
    img = GrayscaleImage(px)
    s = similarity_to_reference(img)
    assert 0 < s <= 1
    assert similarity_to_reference(scale_exposure(img, c)) == pytest.approx(s, rel=1e-12)


def family():
    anchors = [(f"g{k}", synthetic_image(k, shape=1.5 + k)) for k in range(3)]
    mixed = [
        (f"{gid}@{c}", scale_exposure(img, c))
        for gid, img in anchors for c in (1.0, 0.75, 0.5, 0.25)
    ]
    return anchors, mixed


def test_classify_full_accuracy():
    anchors, mixed = family()
    results = classify(mixed, anchors)
    assert [r.group for r in results] == [m.split("@")[0] for m, _ in mixed]
    assert all(r.relative_gap <= 1e-9 for r in results)


def test_classify_unmatched_and_csv():
    anchors, _ = family()
    stranger = ("x", synthetic_image(42))
    (r,) = classify([stranger], anchors)
    assert r.group == UNMATCHED
    text = classification_csv([r])
    assert text.splitlines()[0] == "image,S,group,anchor_S,relative_gap"
    assert ",unmatched," in text


def test_classify_rejects_indistinguishable_anchors():
    img = synthetic_image(0)
    with pytest.raises(AmbiguousAnchorsError):
        classify([("m", img)], [("a", img), ("b", scale_exposure(img, 0.5))])


def test_pgm_ascii_with_comments(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n# a comment\n2 2\n# another\n4\n1 2\n3 4\n")
    img = load_image(p)
    np.testing.assert_allclose(img.pixels, QUAD.pixels)


def test_pgm_binary_round_trip(tmp_path):
    img = GrayscaleImage(np.arange(12).reshape(3, 4) / 11)
    for maxval in (255, 65535):
        p = tmp_path / f"b{maxval}.pgm"
        save_pgm(img, p, binary=True, maxval=maxval)
        back = load_image(p)
        assert back.pixels.shape == (3, 4)
        np.testing.assert_allclose(back.pixels, img.pixels, atol=0.5 / maxval)
    p = tmp_path / "c.pgm"
    save_pgm(img, p, binary=False)
    assert load_image(p).pixels.shape == (3, 4)


def test_csv_round_trip(tmp_path):
    img = synthetic_image(5, 8, 6)
    p = tmp_path / "x.csv"
    save_csv(img, p)
    np.testing.assert_array_equal(load_image(p).pixels, img.pixels)


@pytest.mark.parametrize("content", [
    b"P2\n2 2\n4\n1 2 3\n",
    b"P2\n2 2\n4\n1 2 3 9\n",
    b"P5\n2 2\n255\n\x01",
    b"P7\n2 2\n255\n",
    b"0.1,0.2\n0.3\n",
    b"0.1,abc\n0.3,0.4\n",
    b"0.1,1.5\n0.3,0.4\n",
])
def test_malformed_images(tmp_path, content):
    p = tmp_path / "bad"
    p.write_bytes(content)
    with pytest.raises(ImageFormatError):
        load_image(p)


def test_synthetic_image_deterministic():
    assert np.array_equal(synthetic_image(3).pixels, synthetic_image(3).pixels)
    assert synthetic_image(3).pixels.shape == (64, 64)
    assert synthetic_image(3).pixels.max() == 1.0
