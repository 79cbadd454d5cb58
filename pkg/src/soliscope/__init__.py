"""Static analysis framework for a Solidity subset.

Pipeline: parse -> inheritance/name resolution -> CFG -> IR lowering ->
SSA -> analyses -> detectors and printers.
"""

__version__ = "0.1.0"

from soliscope.pipeline import analyze_source, analyze_files  # noqa: E402,F401
