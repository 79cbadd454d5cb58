"""Command-line entry point.

Exit codes: 0 when no finding reaches the fail-on threshold, 1 when one
does, 2 on usage, parse, or internal errors. JSON output is byte-stable
across runs unless --stats adds timing.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import re
import sys
from typing import Optional

from soliscope.detectors import DETECTOR_IDS, run_detectors
from soliscope.detectors.base import Finding, Severity
from soliscope.errors import SoliscopeError
from soliscope.pipeline import SourceAnalysis, analyze_source
from soliscope.printers import PRINTER_IDS, run_printer
from soliscope.sourcemap import SourceFile

_SEVERITY_BY_NAME = {s.value.lower(): s for s in Severity}

_COLORS = {
    Severity.HIGH: "\x1b[31m",
    Severity.MEDIUM: "\x1b[33m",
    Severity.LOW: "\x1b[36m",
    Severity.INFORMATIONAL: "\x1b[37m",
    Severity.OPTIMIZATION: "\x1b[32m",
}
_RESET = "\x1b[0m"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soliscope",
        description="Static analysis for a Solidity subset: vulnerability "
                    "detectors, optimization hints, and code-understanding printers.",
    )
    parser.add_argument("paths", nargs="+", metavar="FILE.sol", help="input files")
    parser.add_argument("--detect", help="comma-separated detector ids to run")
    parser.add_argument("--exclude", help="comma-separated detector ids to skip")
    parser.add_argument("--print", dest="printers",
                        help="comma-separated printer ids (" + ", ".join(PRINTER_IDS) + ")")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--fail-on", default="medium",
                        choices=sorted(_SEVERITY_BY_NAME),
                        help="lowest severity that makes the run exit 1 (default: medium)")
    parser.add_argument("--stats", action="store_true", help="report timing per file")
    parser.add_argument("--timeout", type=float, default=0.0,
                        help="per-file analysis timeout in seconds (0 = none)")
    return parser


def _split_ids(value: Optional[str]) -> Optional[list[str]]:
    if value is None:
        return None
    return [v.strip() for v in value.split(",") if v.strip()]


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("SOLISCOPE_NO_COLOR")


def _severity_header(severity: Severity, color: bool) -> str:
    if color:
        return f"{_COLORS[severity]}{severity.value}{_RESET}"
    return severity.value


def _finding_to_dict(finding: Finding, source_files: dict[str, SourceFile]) -> dict:
    elements = []
    for element in finding.elements:
        sf = source_files.get(element.span.file)
        if sf is not None:
            ls, le, cs, ce = sf.line_range(element.span)
        else:
            ls = le = element.span.line
            cs, ce = element.span.column, element.span.column + 1
        elements.append({
            "type": element.type,
            "name": element.name,
            "source_mapping": {
                "file": element.span.file,
                "line_start": ls,
                "line_end": le,
                "col_start": cs,
                "col_end": ce,
            },
        })
    return {
        "check": finding.check,
        "severity": finding.severity.value,
        "confidence": finding.confidence.value,
        "message": finding.message,
        "elements": elements,
    }


def render_json(findings: list[Finding], analyses: list[SourceAnalysis],
                stats: bool, error: Optional[str] = None) -> str:
    source_files = {a.source.name: a.source for a in analyses}
    doc: dict = {
        "success": error is None,
        "findings": [_finding_to_dict(f, source_files) for f in findings],
    }
    if error is not None:
        doc["error"] = error
    if stats:
        doc["stats"] = {
            "parse_ms": round(sum(a.parse_ms for a in analyses), 3),
            "analyze_ms": round(sum(a.analyze_ms for a in analyses), 3),
        }
    return json.dumps(doc, indent=2) + "\n"


def render_text(findings: list[Finding], color: bool) -> str:
    if not findings:
        return "0 findings\n"
    lines = []
    current: Optional[Severity] = None
    for finding in findings:
        if finding.severity is not current:
            current = finding.severity
            lines.append(f"== {_severity_header(current, color)} ==")
        span = finding.primary_span
        where = span.location() if span else "?"
        lines.append(f"[{finding.check}] {finding.message}")
        lines.append(f"    {where}: {finding.excerpt}" if finding.excerpt
                     else f"    {where}")
    lines.append(f"{len(findings)} finding{'s' if len(findings) != 1 else ''}")
    return "\n".join(lines) + "\n"


def _safe_filename(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def _emit_printer_outputs(analyses: list[SourceAnalysis], printer_ids: list[str],
                          findings: list[Finding]) -> None:
    for analysis in analyses:
        for printer_id in printer_ids:
            for output in run_printer(printer_id, analysis, findings):
                if output.format == "dot":
                    filename = _safe_filename(output.name) + ".dot"
                    with open(filename, "w", encoding="utf-8") as handle:
                        handle.write(output.body)
                    print(f"wrote {filename}", file=sys.stderr)
                else:
                    sys.stdout.write(output.body)
                    if output.body and not output.body.endswith("\n"):
                        sys.stdout.write("\n")


def _analyze_all(paths: list[str], timeout: float) -> list[SourceAnalysis]:
    """Analyze files concurrently, results kept in input order."""
    texts = []
    for path in paths:
        if not os.path.exists(path):
            raise SoliscopeError(f"cannot open '{path}': no such file")
        try:
            with open(path, "r", encoding="utf-8") as handle:
                texts.append(handle.read())
        except (OSError, UnicodeDecodeError) as exc:
            raise SoliscopeError(f"cannot read '{path}': {exc}") from exc

    if len(paths) == 1:
        return [analyze_source(texts[0], paths[0])]
    with concurrent.futures.ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
        futures = [pool.submit(analyze_source, text, path)
                   for text, path in zip(texts, paths)]
        out = []
        for path, future in zip(paths, futures):
            try:
                out.append(future.result(timeout=timeout or None))
            except concurrent.futures.TimeoutError as exc:
                raise SoliscopeError(f"analysis of '{path}' timed out") from exc
        return out


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    detect = _split_ids(args.detect)
    exclude = _split_ids(args.exclude) or []
    printers = _split_ids(args.printers) or []

    for det_id in (detect or []) + exclude:
        if det_id not in DETECTOR_IDS:
            print(f"error: unknown detector '{det_id}'", file=sys.stderr)
            return 2
    if detect is not None and set(detect) & set(exclude):
        print("error: --detect and --exclude overlap", file=sys.stderr)
        return 2
    for printer_id in printers:
        if printer_id not in PRINTER_IDS:
            print(f"error: unknown printer '{printer_id}'", file=sys.stderr)
            return 2

    try:
        analyses = _analyze_all(args.paths, args.timeout)
    except SoliscopeError as exc:
        if args.format == "json":
            sys.stdout.write(render_json([], [], args.stats, error=str(exc)))
        print(f"error: {exc}", file=sys.stderr)
        return 2

    findings = run_detectors(analyses, enabled=detect, excluded=exclude)

    if printers:
        _emit_printer_outputs(analyses, printers, findings)

    if args.format == "json":
        sys.stdout.write(render_json(findings, analyses, args.stats))
    else:
        sys.stdout.write(render_text(findings, _use_color()))
        if args.stats:
            for analysis in analyses:
                print(f"{analysis.source.name}: parse {analysis.parse_ms:.1f} ms, "
                      f"analyze {analysis.analyze_ms:.1f} ms", file=sys.stderr)

    threshold = _SEVERITY_BY_NAME[args.fail_on]
    if any(f.severity.rank >= threshold.rank for f in findings):
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
