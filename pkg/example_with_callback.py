#!/usr/bin/env python3
"""
Example: Running the acceptance suite with a progress callback

Shows how to drive VerificationRunner programmatically and follow each
check through a callback instead of the status lines on standard error.
"""

import io
import sys

from ellk3_stab.profiles import load_config
from ellk3_stab.verify import VerificationRunner


def progress_callback(step, total_steps, message, error=None):
    """
    Custom progress callback function

    Args:
        step: Current step number (0 before the first check)
        total_steps: Total number of checks
        message: Status message
        error: Failure detail (if any)
    """
    percentage = (step / total_steps) * 100 if total_steps else 100

    if error:
        print(f"[{percentage:.0f}%] FAILED {message}: {error}")
    else:
        print(f"[{percentage:.0f}%] {message}")


def main():
    """Example usage with progress callback"""
    suite = sys.argv[1] if len(sys.argv) > 1 else "all"

    print("ellk3-stab - Progress Callback Example")
    print("=" * 60)
    print()

    config = load_config(profile="desk")
    runner = VerificationRunner(
        config,
        progress_callback=progress_callback,
        stream=io.StringIO()  # keep the status lines out of the way
    )

    try:
        report = runner.run(suite)
    except ValueError as e:
        print(f"Error: {e}")
        return 1

    print()
    print(f"{len(report.results) - len(report.failures)}/{len(report.results)} checks passed")
    for result in report.failures:
        print(f"  ✗ {result.suite}: {result.name} - {result.detail}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
