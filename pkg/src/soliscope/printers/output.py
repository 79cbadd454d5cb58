"""Printer output container."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class PrinterOutput:
    printer: str
    format: str  # text | dot | markdown
    body: str
    name: str  # basename for file output (DOT)
