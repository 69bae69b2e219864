"""Abstract interface for runtime provider management in theta-lab.

A runtime provider builds the shared objects a command needs (settings, bundled
fixtures, memoized split-prime data, seeded random sources) and hands them to the
handlers as one context dictionary.
"""

from abc import ABC, abstractmethod
from contextlib import contextmanager
from typing import Any, Dict, Iterator


class RuntimeProvider(ABC):
    """Abstract base class for runtime provider management.

    RuntimeProvider负责管理命令运行时的各种提供者（providers），
    包括配置、夹具 (fixtures) 加载和缓存资源的生命周期。
    """

    @abstractmethod
    @contextmanager
    def init_runtime(self, config: Dict[str, Any]) -> Iterator[Dict[str, Any]]:
        """
        抽象的运行时初始化方法，由子类实现。

        Args:
            config: 配置字典

        Yields:
            包含运行时上下文对象的字典 {"config", "providers"}
        """
        raise NotImplementedError

    @abstractmethod
    def initialize_providers(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        初始化所有提供者，由子类实现。

        Args:
            config: 配置字典

        Returns:
            初始化后的提供者字典
        """
        raise NotImplementedError
