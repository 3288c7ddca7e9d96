"""Verification targets, the runner and report rendering."""

from latcheck.verify.report import exit_code, render
from latcheck.verify.runner import run_targets
from latcheck.verify.targets import TARGET_IDS, RunOptions, expand_target, run_target

__all__ = ["TARGET_IDS", "RunOptions", "exit_code", "expand_target", "render", "run_target", "run_targets"]
