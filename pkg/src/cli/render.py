#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import json

from src.cli.reports import CompareReport, LabReport, ModelReport, QueryReport, ResidualReport
from src.semantics.corpus import CorpusReport
from src.semantics.evaluation import Model


def _atoms(atoms):
    return "{" + ", ".join(atoms) + "}" if atoms else "∅"


def model_dict(model: Model):
    return {"true": model.true, "false": model.false, "undefined": model.undefined}


def _model_lines(model: Model, prefix=""):
    return [f"{prefix}true: {_atoms(model.true)}",
            f"{prefix}false: {_atoms(model.false)}",
            f"{prefix}undefined: {_atoms(model.undefined)}"]


def to_json(report):
    """报告的 JSON 形式（原子为排序后的字符串）"""
    if isinstance(report, ModelReport):
        data = {"semantics": report.model.kind.value, "mode": report.mode}
        data.update(model_dict(report.model))
        if report.plan:
            data["plan"] = list(report.plan)
        return data
    if isinstance(report, CompareReport):
        data = {"semantics": report.modular.kind.value, "mode": "compare"}
        data.update(model_dict(report.modular))
        data["equal"] = report.equal
        data["plan"] = list(report.plan)
        data["monolithic"] = model_dict(report.monolithic)
        return data
    if isinstance(report, ResidualReport):
        data = {"semantics": report.kind.value, "module": report.source,
                "residual": [str(rule) for rule in report.residual.rules],
                "defines": [str(p) for p in sorted(report.residual.defines)]}
        if report.check is not None:
            check = report.check
            data.update({
                "equal": check.equal,
                "residual_precedes": check.residual_precedes,
                "union": model_dict(check.union_model),
                "from_start": model_dict(check.from_start),
                "from_bottom": model_dict(check.from_bottom),
            })
        return data
    if isinstance(report, QueryReport):
        return {"semantics": report.kind.value, "goal": report.goal, "variables": list(report.variables),
                "answers": [dict(zip(report.variables, a)) for a in report.answers],
                "undefined": [dict(zip(report.variables, a)) for a in report.undefined]}
    if isinstance(report, LabReport):
        return {"censuses": [c.to_dict() for c in report.censuses],
                "identities": [i.to_dict() for i in report.identities],
                "examples": [e.to_dict() for e in report.examples],
                "ok": report.ok}
    if isinstance(report, CorpusReport):
        return report.to_dict()
    raise TypeError(f"无法渲染的报告类型: {type(report).__name__}")


def _substitution(variables, values):
    if not variables:
        return "yes"
    return ", ".join(f"{v}={c}" for v, c in zip(variables, values))


def to_text(report):
    lines = []
    if isinstance(report, ModelReport):
        lines.append(f"semantics: {report.model.kind.value}")
        lines.append(f"mode: {report.mode}" + (f" ({' -> '.join(report.plan)})" if report.plan else ""))
        lines.extend(_model_lines(report.model))
    elif isinstance(report, CompareReport):
        lines.append(f"semantics: {report.modular.kind.value}")
        lines.append(f"plan: {' -> '.join(report.plan)}")
        lines.extend(_model_lines(report.modular, "modular "))
        lines.extend(_model_lines(report.monolithic, "monolithic "))
        lines.append("EQUAL" if report.equal else "DIFFERENT")
    elif isinstance(report, ResidualReport):
        lines.append(f"% {report.kind.value} residual of {report.source}")
        lines.append(report.residual.to_text())
        if report.check is not None:
            check = report.check
            lines.extend(_model_lines(check.union_model, "union "))
            lines.extend(_model_lines(check.from_start, "with residual, from X "))
            lines.extend(_model_lines(check.from_bottom, "with residual "))
            lines.append(f"residual precedes: {str(check.residual_precedes).lower()}")
            lines.append("EQUAL" if check.equal else "DIFFERENT")
    elif isinstance(report, QueryReport):
        lines.append(f"goal: {report.goal}")
        if not report.answers and not report.undefined:
            lines.append("no")
        lines.extend(_substitution(report.variables, a) for a in report.answers)
        lines.extend(f"undefined: {_substitution(report.variables, a)}" for a in report.undefined)
    elif isinstance(report, LabReport):
        for census in report.censuses:
            lines.append(f"== {census.kind} census: {census.lattice} "
                         f"({census.functions} functions, {census.instances} instances)")
            lines.append(census.to_frame().to_string(index=False))
            for key, value in sorted(census.extra.items()):
                lines.append(f"{key}: {value}")
            lines.append("ok" if census.ok else f"VIOLATIONS: {census.theorem_violations}")
        for identities in report.identities:
            lines.append(f"== closure identities: {identities.lattice} "
                         f"({identities.functions} functions, {identities.pairs} ordered pairs)")
            for law, count in sorted(identities.violations.items()):
                lines.append(f"  {law}: {count}")
        for example in report.examples:
            lines.append(f"== example: {example.name}")
            for name, passed in example.checks.items():
                lines.append(f"  [{'✓' if passed else '✗'}] {name}")
            for name, value in example.values.items():
                lines.append(f"  {name} = {value}")
        lines.append("ALL PASSED" if report.ok else "FAILED")
    elif isinstance(report, CorpusReport):
        lines.append(f"corpus: {report.count} programs, seed {report.seed}")
        lines.append(report.to_frame().to_string(index=False))
        for index, check in report.failures:
            lines.append(f"FAILED program {index}: {check}")
        lines.append("ALL PASSED" if report.ok else "FAILED")
    else:
        raise TypeError(f"无法渲染的报告类型: {type(report).__name__}")
    return "\n".join(lines) + "\n"


def render(report, output_format="text"):
    """把报告渲染为文本或 JSON"""
    if output_format == "json":
        return json.dumps(to_json(report), ensure_ascii=False, indent=2) + "\n"
    return to_text(report)
