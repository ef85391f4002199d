import numpy as np

from zetalab.rng import as_key, key_uniform, keyed_uniform, stream_key, uniforms, unit_phase


def test_pure_function_of_keys():
    a = uniforms(7, np.arange(1000), 3)
    b = uniforms(7, np.arange(1000)[::-1], 3)[::-1]
    assert np.array_equal(a, b)
    assert not np.array_equal(a, uniforms(8, np.arange(1000), 3))
    assert not np.array_equal(a, uniforms(7, np.arange(1000), 4))


def test_stream_prefix_matches():
    s, st, i = as_key(12345), as_key(77), as_key(9)
    assert keyed_uniform(stream_key(s, st), i) == key_uniform(s, st, i)


def test_negative_seed_maps_to_uint64():
    assert as_key(-1) == np.uint64(2**64 - 1)


def test_uniform_moments():
    u = uniforms(0, np.arange(200_000))
    assert 0.0 <= u.min() and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 4 * np.sqrt(1 / 12 / len(u))
    assert abs(u.var() - 1 / 12) < 0.002
    # lag-1 correlation along streams
    assert abs(np.corrcoef(u[:-1], u[1:])[0, 1]) < 0.01


def test_unit_phase_accuracy():
    u = np.concatenate([np.linspace(0, 1, 4001, endpoint=False), uniforms(1, np.arange(2000))])
    c = np.array([unit_phase(x) for x in u])
    # the reference itself rounds 2 pi u, worth up to ~7e-16 in the argument
    assert np.max(np.abs(c[:, 0] - np.cos(2 * np.pi * u))) < 1e-15
    assert np.max(np.abs(c[:, 1] - np.sin(2 * np.pi * u))) < 1e-15
