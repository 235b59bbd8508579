#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
import sys

from src.cli.commands import main


if __name__ == "__main__":
    # 日志写到 stderr，报告写到 stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(main())
