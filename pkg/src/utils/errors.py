#!/usr/bin/env python3
# -*- coding: utf-8 -*-


class ClosureLabError(Exception):
    """所有本项目异常的基类，命令行据此决定退出码"""
    pass
