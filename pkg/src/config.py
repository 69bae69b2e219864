"""
使用 Pydantic 进行强类型配置管理 (strongly typed settings for theta-lab).
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Configs(BaseSettings):
    """
    应用配置模型，从环境变量 (THETA_LAB_*) 或 .env 文件加载。
    """

    model_config = SettingsConfigDict(
        env_prefix="THETA_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="allow"  # 允许额外的字段
    )

    precision: int = Field(64, ge=1, description="cap on p-adic lifting precision")
    log_level: str = Field("INFO", description="loguru level for stderr output")
    enable_execution_log: bool = Field(False, description="include execution_log in command results")
    check_seed: int = Field(20240601, description="seed for the invariant suites")
    check_samples: int = Field(20, ge=1, description="random inputs per suite property")
    fixtures_dir: Optional[str] = Field(None, description="override for the bundled fixtures directory")

    def __init__(self, args_dict: Optional[dict] = None, **values):
        """
        初始化配置实例。

        Args:
            args_dict: 命令行参数字典（可选），None 值被忽略以保留环境变量
            **values: 其他配置值
        """
        if args_dict:
            values.update({k: v for k, v in args_dict.items() if v is not None})
        super().__init__(**values)


def get_settings(args_dict: Optional[dict] = None) -> Configs:
    """
    返回一个 Configs 实例。

    Args:
        args_dict: 命令行参数字典（可选）

    Returns:
        Configs 实例
    """
    return Configs(args_dict)
