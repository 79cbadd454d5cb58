"""Detector registry and driver.

Detectors run in alphabetical id order; a crashing detector is isolated
and recorded as an Informational internal-error finding so the others
still report. Findings are deduplicated on (check, primary span) and
sorted by severity, then location.
"""

from __future__ import annotations

import traceback
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from soliscope.detectors import ether, optimizations, reentrancy, shadowing, uninitialized
from soliscope.detectors.base import (
    Confidence,
    Element,
    Finding,
    Severity,
)
from soliscope.pipeline import SourceAnalysis


@dataclass(frozen=True)
class DetectorInfo:
    id: str
    severity: Severity
    help: str
    run: Callable[[SourceAnalysis], list[Finding]]


REGISTRY: list[DetectorInfo] = sorted(
    [
        DetectorInfo("reentrancy", Severity.HIGH,
                     "state written after an external call", reentrancy.detect),
        DetectorInfo("uninitialized-state", Severity.HIGH,
                     "state variables read but never set", uninitialized.detect_state),
        DetectorInfo("uninitialized-local", Severity.MEDIUM,
                     "locals that may be read before assignment", uninitialized.detect_local),
        DetectorInfo("shadowing", Severity.HIGH,
                     "declarations hiding other declarations", shadowing.detect),
        DetectorInfo("suicidal", Severity.HIGH,
                     "unprotected selfdestruct", ether.detect_suicidal),
        DetectorInfo("locked-ether", Severity.MEDIUM,
                     "payable contract without ether outflow", ether.detect_locked_ether),
        DetectorInfo("arbitrary-send", Severity.HIGH,
                     "ether sent to a caller-controlled destination", ether.detect_arbitrary_send),
        DetectorInfo("constable-states", Severity.OPTIMIZATION,
                     "state variables that could be constant", optimizations.detect_constable),
        DetectorInfo("external-function", Severity.OPTIMIZATION,
                     "public functions never called internally", optimizations.detect_external),
    ],
    key=lambda d: d.id,
)

DETECTOR_IDS = [d.id for d in REGISTRY]


def detector_by_id(detector_id: str) -> Optional[DetectorInfo]:
    for info in REGISTRY:
        if info.id == detector_id:
            return info
    return None


def _dedupe(findings: list[Finding]) -> list[Finding]:
    seen = set()
    out = []
    for finding in findings:
        span = finding.primary_span
        key = (finding.check, span.file if span else "", span.offset if span else -1)
        if key in seen:
            continue
        seen.add(key)
        out.append(finding)
    return out


def run_detectors(analyses: Iterable[SourceAnalysis],
                  enabled: Optional[Iterable[str]] = None,
                  excluded: Optional[Iterable[str]] = None) -> list[Finding]:
    enabled_set = set(enabled) if enabled is not None else None
    excluded_set = set(excluded or ())
    findings: list[Finding] = []
    for analysis in analyses:
        for info in REGISTRY:
            if enabled_set is not None and info.id not in enabled_set:
                continue
            if info.id in excluded_set:
                continue
            try:
                findings.extend(info.run(analysis))
            except Exception:  # noqa: BLE001 - robustness over purity
                detail = traceback.format_exc(limit=1).strip().splitlines()[-1]
                findings.append(Finding(
                    info.id, Severity.INFORMATIONAL, Confidence.MEDIUM,
                    f"internal error while running {info.id}: {detail}",
                    [Element("contract", analysis.source.name,
                             analysis.source.span(0, 0))],
                ))
    findings = _dedupe(findings)
    findings.sort(key=lambda f: f.sort_key())
    return findings
