#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import json
import logging
import os

import dotenv

from src.utils.errors import ClosureLabError

logger = logging.getLogger(__name__)

ENV_PREFIX = "CLOSURE_LAB_"


class ConfigError(ClosureLabError):
    pass


class ConfigManager:
    """配置管理器，负责存储和加载运行参数"""

    def __init__(self, config_dir=None):
        """初始化配置管理器

        Args:
            config_dir: 配置目录，默认取环境变量 CLOSURE_LAB_HOME 或 ~/.closure_lab
        """
        self.config_dir = config_dir or os.environ.get(f"{ENV_PREFIX}HOME") \
            or os.path.join(os.path.expanduser("~"), ".closure_lab")
        self.config_file = os.path.join(self.config_dir, "config.json")
        self.env_file = os.path.join(self.config_dir, ".env")

        # 先加载 .env，使其中的 CLOSURE_LAB_* 参与覆盖
        if os.path.exists(self.env_file):
            dotenv.load_dotenv(self.env_file, override=True)

        self.config = self.load_config()

    def load_config(self):
        """加载配置文件，并用环境变量覆盖"""
        config = self.get_default_config()
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, "r", encoding="utf-8") as f:
                    stored = json.load(f)
                if not isinstance(stored, dict):
                    raise ValueError("配置文件顶层必须是对象")
                config.update(stored)
            except Exception as e:
                logger.warning("加载配置文件失败，使用默认配置: %s", e)
                config = self.get_default_config()
        return self._apply_environment(config)

    def _apply_environment(self, config):
        defaults = self.get_default_config()
        for key, default in defaults.items():
            raw = os.environ.get(ENV_PREFIX + key.upper())
            if raw is None:
                continue
            try:
                if isinstance(default, list):
                    config[key] = [item.strip() for item in raw.split(",") if item.strip()]
                elif isinstance(default, int):
                    config[key] = int(raw)
                else:
                    config[key] = raw
            except ValueError:
                raise ConfigError(f"环境变量 {ENV_PREFIX + key.upper()} 的值无效: {raw}")
        return config

    def save_config(self):
        """保存配置到文件"""
        try:
            os.makedirs(self.config_dir, exist_ok=True)
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(self.config, f, ensure_ascii=False, indent=2)
            return True
        except Exception as e:
            logger.warning("保存配置文件失败: %s", e)
            return False

    def get_default_config(self):
        """获取默认配置"""
        return {
            "max_ground_atoms": 4096,        # 原子全集上限
            "max_ground_rules": 20000,       # 单模块基例化规则上限
            "max_builtin_size": 64,          # 内置格元素上限
            "monotone_enumeration_budget": 6,
            "all_functions_budget": 3,
            "monotone_sandwich_budget": 4,
            "gallery_cap": 10,               # 每类反例展示上限
            "corpus_count": 200,
            "corpus_seed": 0,
            "goal_program_count": 20,
            "monotonicity_pairs": 500,
            "lab_lattices": ["chain(2)", "chain(3)", "chain(4)", "boolean(2)"],
            "census_workers": 1,
            "log_level": "WARNING",
        }

    def get(self, key, default=None):
        """获取配置项"""
        return self.config.get(key, default)

    def set(self, key, value):
        """设置配置项"""
        self.config[key] = value
        self.save_config()

