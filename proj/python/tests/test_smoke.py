import numpy as np
import pytest

import twseg


def planted(k=4, n=300, seed=1):
    x, gt = twseg.synth_generate(k=k, n=n, seed=seed)
    return np.asarray(x), gt


def test_segment_recovers_planted_actions():
    x, gt = planted()
    r = twseg.segment(x, 4)
    assert r["labels"].shape == (300,)
    assert len(set(r["labels"].tolist())) == 4
    assert not r["k_unreachable"]
    assert list(r["level_counts"]) == sorted(r["level_counts"], reverse=True)
    assert twseg.evaluate(r["labels"], gt)["mof"] > 0.9


def test_hierarchy_is_nested():
    x, _ = planted(seed=3)
    levels = twseg.build_hierarchy(x)
    for fine, coarse in zip(levels, levels[1:]):
        for c in np.unique(fine):
            assert len(np.unique(coarse[fine == c])) == 1
    top = twseg.select_level([l.tolist() for l in levels], 4)
    labels, merges = twseg.refine_to_k(x, top, 4)
    assert len(np.unique(labels)) == 4
    assert len(merges) == len(np.unique(top)) - 4


def test_distances_match_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(30, 5)).astype(np.float32)
    xn = x.astype(np.float64)
    xn /= np.linalg.norm(xn, axis=1, keepdims=True)
    gf = 1.0 - xn @ xn.T
    np.fill_diagonal(gf, 1.0)
    assert np.allclose(twseg.feature_distances(x), gf, atol=1e-12)
    t = np.arange(1, 31, dtype=float)
    w = gf * (np.abs(t[:, None] - t[None, :]) / 30)
    np.fill_diagonal(w, 1.0)
    assert np.allclose(twseg.weighted_distances(x), w, atol=1e-12)
    nn = twseg.nearest_neighbors(x)
    masked = w.copy()
    np.fill_diagonal(masked, np.inf)
    assert nn.tolist() == masked.argmin(axis=1).tolist()


def test_baselines_and_matching():
    x, gt = planted(k=5, n=250, seed=7)
    assert twseg.equal_split(10, 3).tolist() == [0, 0, 0, 0, 1, 1, 1, 2, 2, 2]
    labels, wcss = twseg.kmeans(x, 5, seed=2)
    assert len(labels) == 250 and wcss > 0
    assert len(np.unique(twseg.finch(x, 5))) == 5
    mapping, total = twseg.hungarian_match(np.array([[5, 1], [2, 4]]))
    assert mapping == [0, 1] and total == 9
    assert twseg.purity(np.zeros(4, dtype=int), ["a", "a", "b", "b"]) == pytest.approx(0.5)


def test_errors_raise(tmp_path):
    with pytest.raises(twseg.TwsegError):
        twseg.segment(np.zeros((1, 3), dtype=np.float32), 1)
    with pytest.raises(twseg.TwsegError):
        twseg.load_features(tmp_path / "missing.bin")
    x, _ = planted(n=40, k=2)
    twseg.save_features(x, tmp_path / "f.csv")
    assert np.allclose(twseg.load_features(tmp_path / "f.csv"), x, atol=1e-5)
