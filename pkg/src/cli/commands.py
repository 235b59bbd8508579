#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

from src.algebra.function_lab import (check_closure_identities, reproduce_appendix_example,
                                      reproduce_duality_counterexample, run_lemma_census, run_sandwich_census)
from src.cli.render import render
from src.cli.reports import CompareReport, LabReport, ModelReport, QueryReport, ResidualReport
from src.lattice.orders import make_builtin, parse_lattice_name
from src.logic.grounding import Herbrand
from src.logic.modules import stratify, wrap_goal
from src.logic.syntax import Constant
from src.semantics.corpus import run_corpus
from src.semantics.evaluation import Model, compare, modular_eval, monolithic_eval, start_element
from src.semantics.operators import SemanticsKind
from src.semantics.residual import partial_eval_check, residual_module
from src.semantics.worked_example import reproduce_worked_example
from src.utils.config_manager import ConfigError, ConfigManager
from src.utils.errors import ClosureLabError
from src.utils.program_parser import ProgramSemanticError, ProgramSyntaxError, parse_goal, parse_program

logger = logging.getLogger(__name__)

COMMANDS = ("eval", "compare", "residualize", "query", "lab", "corpus")
MODES = ("modular", "monolithic", "compare")
FORMATS = ("text", "json")


@dataclass(frozen=True)
class RunConfig:
    """一次命令运行的全部参数"""
    command: str
    program_path: Optional[str] = None
    semantics: SemanticsKind = SemanticsKind.LEAST_MODEL
    mode: str = "modular"
    assume: str = ""
    output_format: str = "text"
    seed: int = 0
    count: int = 200
    module: Optional[str] = None
    verify: Optional[str] = None
    goal: Optional[str] = None
    lattices: Tuple[str, ...] = ("chain(2)", "chain(3)", "chain(4)", "boolean(2)")
    workers: int = 1
    pairs: int = 500
    goal_programs: int = 20
    max_ground_atoms: int = 4096
    max_ground_rules: int = 20000
    max_builtin_size: int = 64
    monotone_budget: int = 6
    all_functions_budget: int = 3
    monotone_sandwich_budget: int = 4
    gallery_cap: int = 10

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"未知命令: {self.command}")
        if self.mode not in MODES:
            raise ConfigError(f"未知的求值模式: {self.mode}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"未知的输出格式: {self.output_format}")
        for name in ("count", "workers", "pairs", "max_ground_atoms", "max_ground_rules", "max_builtin_size",
                     "monotone_budget", "all_functions_budget", "monotone_sandwich_budget", "gallery_cap"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} 必须为正数，得到 {getattr(self, name)}")
        if self.goal_programs < 0:
            raise ConfigError(f"goal_programs 不能为负数，得到 {self.goal_programs}")
        if self.command in ("eval", "compare", "residualize", "query") and not self.program_path:
            raise ConfigError(f"{self.command} 需要程序文件")
        if self.command == "residualize" and not self.module:
            raise ConfigError("residualize 需要 --module")
        if self.command == "query" and self.goal is None:
            raise ConfigError("query 需要 --goal")
        return self


def load_program(path):
    """读取并解析程序文件，"-" 表示标准输入"""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise ClosureLabError(f"无法读取程序文件 {path}: {e}") from e
    return parse_program(text)


def _prepare(config: RunConfig, modules, extra_literals=()):
    literals = parse_goal(config.assume) if config.assume.strip() else ()
    atoms = [l.atom for l in tuple(literals) + tuple(extra_literals)]
    herbrand = Herbrand(modules,
                        extra_constants={a for atom in atoms for a in atom.args if isinstance(a, Constant)},
                        extra_predicates={l.atom.signature for l in literals},
                        max_atoms=config.max_ground_atoms, max_rules=config.max_ground_rules)
    return herbrand, start_element(literals, herbrand.universe, config.semantics)


def _evaluate(config: RunConfig, modules, herbrand, start):
    kind = config.semantics
    if config.mode == "monolithic":
        return Model(kind, monolithic_eval(modules, herbrand, start, kind), herbrand.universe), ()
    plan = stratify(modules)
    return Model(kind, modular_eval(plan, herbrand, start, kind), herbrand.universe), tuple(m.name for m in plan)


def run_eval(config: RunConfig):
    modules = list(load_program(config.program_path).modules)
    herbrand, start = _prepare(config, modules)
    if config.mode == "compare":
        return run_compare(config, modules, herbrand, start)
    model, plan = _evaluate(config, modules, herbrand, start)
    return ModelReport(model, config.mode, plan)


def run_compare(config: RunConfig, modules=None, herbrand=None, start=None):
    if modules is None:
        modules = list(load_program(config.program_path).modules)
        herbrand, start = _prepare(config, modules)
    result = compare(modules, herbrand, start, config.semantics)
    return CompareReport(result.modular, result.monolithic, result.plan)


def run_residualize(config: RunConfig):
    program = load_program(config.program_path)
    modules = list(program.modules)
    lower = program.module(config.module)
    herbrand, start = _prepare(config, modules)
    kind = config.semantics
    if config.verify:
        check = partial_eval_check(program.module(config.verify), lower, herbrand, start, kind)
        return ResidualReport(kind, lower.name, check.residual, check)
    _, residual = residual_module(lower, herbrand, start, kind)
    return ResidualReport(kind, lower.name, residual)


def run_query(config: RunConfig):
    modules = list(load_program(config.program_path).modules)
    goal = parse_goal(config.goal)
    wrapper = wrap_goal(goal, modules)
    everything = modules + [wrapper]
    herbrand, start = _prepare(config, everything, goal)
    model, _ = _evaluate(config, everything, herbrand, start)
    answer = wrapper.rules[0].head
    report = QueryReport(config.semantics, ", ".join(str(l) for l in goal),
                         tuple(str(v) for v in answer.variables))
    true, undefined = set(model.true), set(model.undefined)
    for atom in herbrand.universe.atoms:
        if atom.predicate != answer.predicate:
            continue
        values = tuple(str(a) for a in atom.args)
        if str(atom) in true:
            report.answers.append(values)
        elif str(atom) in undefined:
            report.undefined.append(values)
    return report


def run_lab(config: RunConfig):
    report = LabReport()
    for name in config.lattices:
        lattice = parse_lattice_name(name, max_size=config.max_builtin_size)
        report.censuses.append(run_lemma_census(lattice, budget=config.monotone_budget,
                                                gallery_cap=config.gallery_cap, workers=config.workers))
        report.identities.append(check_closure_identities(lattice, budget=config.monotone_budget))
    chain = make_builtin("appendix_chain")
    report.censuses.append(run_sandwich_census(chain, "all", all_budget=config.all_functions_budget,
                                               gallery_cap=config.gallery_cap))
    diamond = make_builtin("boolean", 2)
    report.censuses.append(run_sandwich_census(diamond, "monotone", monotone_budget=config.monotone_sandwich_budget,
                                               gallery_cap=config.gallery_cap))
    report.examples.extend([reproduce_duality_counterexample(), reproduce_appendix_example(),
                            reproduce_worked_example()])
    return report


def run_corpus_command(config: RunConfig):
    return run_corpus(count=config.count, seed=config.seed, pairs=config.pairs,
                      goal_programs=config.goal_programs, workers=config.workers)


_HANDLERS = {
    "eval": run_eval,
    "compare": run_compare,
    "residualize": run_residualize,
    "query": run_query,
    "lab": run_lab,
    "corpus": run_corpus_command,
}


def execute(config: RunConfig):
    """执行一条命令并返回报告（报告的 ok 属性为假表示验证失败）"""
    config.validate()
    logger.debug("执行 %s", config.command)
    return _HANDLERS[config.command](config)


def build_parser():
    parser = argparse.ArgumentParser(prog="closure-lab", description="闭包算子代数与模块化逻辑程序语义实验工具")
    parser.add_argument("--config-dir", help="配置目录（默认 ~/.closure_lab）")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    def program_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("program", help="程序文件路径，- 表示标准输入")
        p.add_argument("--semantics", default="lfp", help="lfp | fitting | wf")
        p.add_argument("--assume", default="", help='起点文字，例如 "q, not r"')
        p.add_argument("--format", dest="output_format", choices=FORMATS, default="text")
        return p

    p = program_command("eval", "求值程序")
    p.add_argument("--mode", choices=MODES, default="modular")
    program_command("compare", "对比模块化求值与整体求值")
    p = program_command("residualize", "把一个模块的模型还原为残余模块")
    p.add_argument("--module", required=True, help="被还原的模块名")
    p.add_argument("--verify", metavar="MODULE", help="同时对调用它的模块做部分求值检查")
    p = program_command("query", "查询目标的全部满足替换")
    p.add_argument("--goal", required=True, help='查询目标，例如 "path(1,Y)"')
    p.add_argument("--mode", choices=("modular", "monolithic"), default="modular")

    p = sub.add_parser("lab", help="引理与夹逼普查以及三个反例")
    p.add_argument("--lattice", action="append", dest="lattices", help="参与普查的格，可重复")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", dest="output_format", choices=FORMATS, default="text")

    p = sub.add_parser("corpus", help="随机分层程序语料上的性质检查")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--pairs", type=int, help="单调性检查的有序对上限")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", dest="output_format", choices=FORMATS, default="text")
    return parser


def config_from_args(args, manager: ConfigManager):
    """配置文件中的默认值被命令行参数覆盖"""

    def pick(name, key):
        value = getattr(args, name, None)
        return manager.get(key) if value is None else value

    semantics = getattr(args, "semantics", "lfp")
    return RunConfig(
        command=args.command,
        program_path=getattr(args, "program", None),
        semantics=SemanticsKind.parse(semantics),
        mode=getattr(args, "mode", "modular"),
        assume=getattr(args, "assume", ""),
        output_format=args.output_format,
        seed=pick("seed", "corpus_seed"),
        count=pick("count", "corpus_count"),
        module=getattr(args, "module", None),
        verify=getattr(args, "verify", None),
        goal=getattr(args, "goal", None),
        lattices=tuple(pick("lattices", "lab_lattices")),
        workers=pick("workers", "census_workers"),
        pairs=pick("pairs", "monotonicity_pairs"),
        goal_programs=manager.get("goal_program_count"),
        max_ground_atoms=manager.get("max_ground_atoms"),
        max_ground_rules=manager.get("max_ground_rules"),
        max_builtin_size=manager.get("max_builtin_size"),
        monotone_budget=manager.get("monotone_enumeration_budget"),
        all_functions_budget=manager.get("all_functions_budget"),
        monotone_sandwich_budget=manager.get("monotone_sandwich_budget"),
        gallery_cap=manager.get("gallery_cap"),
    )


def main(argv=None, stdout=None):
    """命令行入口

    Returns:
        退出码：0 成功，1 语义错误或验证失败，2 程序文本解析错误
    """
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        manager = ConfigManager(args.config_dir)
        level = "DEBUG" if args.verbose else str(manager.get("log_level", "WARNING")).upper()
        logging.getLogger().setLevel(getattr(logging, level, logging.WARNING))
        config = config_from_args(args, manager)
        report = execute(config)
    except (ProgramSyntaxError, ProgramSemanticError) as e:
        logger.error("%s", e)
        return 2
    except ClosureLabError as e:
        logger.error("%s", e)
        return 1
    stdout.write(render(report, config.output_format))
    if not report.ok:
        logger.error("验证未通过")
        return 1
    return 0
