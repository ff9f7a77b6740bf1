import math

import _veristress as vs


def test_embed_unit_norm():
    z = vs.embed("the earth orbits the sun")
    assert len(z) == 64
    assert abs(math.sqrt(sum(x * x for x in z)) - 1.0) < 1e-12


def test_embed_deterministic():
    assert vs.embed("alpha beta") == vs.embed("alpha beta")
    assert vs.embed("alpha beta") != vs.embed("beta alpha gamma")


def test_schedule_shapes():
    s = vs.build_schedule("sqrt", 1000)
    assert s.T == 1000
    assert len(s.alpha_bar) == 1001
    assert s.beta[0] == 0.0
    assert s.alpha_bar[0] == 1.0
    assert all(a > b for a, b in zip(s.alpha_bar, s.alpha_bar[1:]))


def test_forward_diffuse_changes_vector():
    s = vs.build_schedule("linear", 1000)
    z0 = vs.embed("water boils at one hundred degrees")
    zt = vs.forward_diffuse(z0, s, 500, seed=7)
    assert len(zt) == len(z0)
    assert zt != z0


def test_bayes_denoise_weights():
    s = vs.build_schedule("linear", 1000)
    rows = [[20.0, 0.0], [0.0, 20.0], [-20.0, 0.0]]
    x_hat0, weights, entropy = vs.bayes_denoise([19.0, 1.0], s, 300, rows)
    assert abs(sum(weights) - 1.0) < 1e-12
    assert weights[0] > weights[1] > weights[2]
    assert entropy >= 0.0


def test_generate_world_balanced():
    w = vs.generate_world(entities=10, relations=3, objects=12, seed=1)
    test = w["test"]
    n_sup = sum(1 for c in test if c["label"] == "SUPPORTS")
    n_ref = sum(1 for c in test if c["label"] == "REFUTES")
    assert n_sup == n_ref > 0
    assert len(w["corpus"]) > len(test) // 2


def test_stress_test_recovers_corpus_member():
    w = vs.generate_world(entities=10, relations=3, objects=12, seed=1)
    corpus_texts = [c["text"] for c in w["corpus"]]
    r = vs.stress_test(corpus_texts[0], corpus_texts, t_star=100, seed=3)
    assert r["reconstruction_text"] == corpus_texts[0]
    assert r["e_mse"] < 1e-6


def test_auroc_and_ttest():
    assert vs.auroc([0.9, 0.8, 0.2, 0.1], [True, True, False, False]) == 1.0
    t, p = vs.paired_t_test([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])
    assert abs(t - 3.4641) < 1e-3
    assert abs(p - 0.0742) < 1e-3
