"""Runtime provider for theta-lab commands."""

import json
import os
import random
import sys
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterator, Optional

from cachetools import LRUCache
from loguru import logger

from cmfield import SplitPrimeData, split_prime_data
from interfaces.runtime_provider import RuntimeProvider

DEFAULT_FIXTURES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
# pip install puts the fixtures under data_files
INSTALLED_FIXTURES_DIR = os.path.join(sys.prefix, "share", "theta-lab", "fixtures")


class ThetaLabRuntimeProvider(RuntimeProvider):
    """Runtime provider shared by all command handlers."""

    @contextmanager
    def init_runtime(self, config: Dict[str, Any]) -> Iterator[Dict[str, Any]]:
        """Initialize runtime context for one command invocation."""
        logger.info("Initializing theta-lab runtime...")

        providers = self.initialize_providers(config)

        runtime_context = {
            "config": config,
            "providers": providers,
        }

        try:
            yield runtime_context
        finally:
            logger.info("theta-lab runtime cleanup completed")

    def initialize_providers(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """Initialize fixtures, the split-prime factory and the random source factory."""
        providers: Dict[str, Any] = {}

        fixtures_dir = config.get("fixtures_dir") or (
            DEFAULT_FIXTURES_DIR if os.path.isdir(DEFAULT_FIXTURES_DIR) else INSTALLED_FIXTURES_DIR)
        try:
            providers["fixtures"] = self.load_fixtures(fixtures_dir)
            logger.info(f"Loaded {len(providers['fixtures'])} fixtures from {fixtures_dir}")
        except Exception as e:
            logger.warning(f"Initialize fixtures failed: {e}")
            providers["fixtures"] = {}

        providers["split_prime_factory"] = self.make_split_prime_factory(int(config.get("precision") or 64))
        providers["rng_factory"] = self.make_rng_factory(int(config.get("check_seed") or 0))
        return providers

    def load_fixtures(self, directory: str) -> Dict[str, Any]:
        """加载夹具 JSON 文件；无法读取的文件被跳过。"""
        fixtures: Dict[str, Any] = {}
        if not os.path.isdir(directory):
            logger.warning(f"Fixtures directory {directory} does not exist")
            return fixtures

        for filename in sorted(os.listdir(directory)):
            if not filename.endswith(".json"):
                continue

            file_path = os.path.join(directory, filename)
            try:
                with open(file_path, "r", encoding="utf-8") as f:
                    fixtures[filename[:-5]] = json.load(f)
            except Exception as e:
                logger.warning(f"Failed to load fixture file {filename}: {e}")
                continue

        return fixtures

    @staticmethod
    def make_split_prime_factory(precision: int) -> Callable[[int, int], SplitPrimeData]:
        cache: LRUCache = LRUCache(maxsize=64)

        def split_prime_factory(p: int, d: int) -> SplitPrimeData:
            """Split-prime data at the configured precision, memoized per (p, d)."""
            key = (p, d)
            if key not in cache:
                start = min(8, precision)
                cache[key] = split_prime_data(p, d, start, cap=precision)
                logger.debug(f"Created split-prime data for p={p}, d={d} at precision {start}")
            return cache[key]

        return split_prime_factory

    @staticmethod
    def make_rng_factory(seed: int) -> Callable[[Optional[str]], random.Random]:
        def rng_factory(label: Optional[str] = None) -> random.Random:
            """Random source for the configured seed, or an independent stream per label."""
            return random.Random(seed if label is None else f"{seed}:{label}")

        return rng_factory
