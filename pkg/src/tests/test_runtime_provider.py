import json
import os
import random
import sys

# 添加 src 目录到 Python 路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from runtime_provider import DEFAULT_FIXTURES_DIR, ThetaLabRuntimeProvider  # noqa: E402


def test_bundled_fixtures():
    fixtures = ThetaLabRuntimeProvider().load_fixtures(DEFAULT_FIXTURES_DIR)
    assert {"e4", "e6", "delta", "point_n1", "point_n2", "gamma_n2"} <= set(fixtures)
    assert fixtures["e4"]["n"] == 1


def test_fixtures_dir_override(tmp_path):
    (tmp_path / "one.json").write_text(json.dumps({"d": 1}), encoding="utf-8")
    (tmp_path / "broken.json").write_text("{", encoding="utf-8")
    (tmp_path / "notes.txt").write_text("skip", encoding="utf-8")
    providers = ThetaLabRuntimeProvider().initialize_providers({"fixtures_dir": str(tmp_path)})
    assert providers["fixtures"] == {"one": {"d": 1}}


def test_missing_fixtures_dir(tmp_path):
    providers = ThetaLabRuntimeProvider().initialize_providers({"fixtures_dir": str(tmp_path / "absent")})
    assert providers["fixtures"] == {}


def test_split_prime_factory_memoizes():
    factory = ThetaLabRuntimeProvider.make_split_prime_factory(16)
    first = factory(5, 1)
    assert factory(5, 1) is first
    assert first.p == 5


def test_rng_factory():
    rng_factory = ThetaLabRuntimeProvider.make_rng_factory(3)
    assert rng_factory().random() == random.Random(3).random()
    assert rng_factory("theta:x").random() == rng_factory("theta:x").random()
    assert rng_factory("theta:x").random() != rng_factory("theta:y").random()
    assert ThetaLabRuntimeProvider.make_rng_factory(4)("theta:x").random() != rng_factory("theta:x").random()


def test_init_runtime_context():
    provider = ThetaLabRuntimeProvider()
    config = {"precision": 8}
    with provider.init_runtime(config) as ctx:
        assert ctx["config"] is config
        assert set(ctx["providers"]) == {"fixtures", "split_prime_factory", "rng_factory"}
