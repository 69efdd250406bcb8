"""
Test suite for the robustvda command-line package
Runs all tests and provides summary
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from robustvda.test.test_config import run_all_tests as test_config
from robustvda.test.test_pipeline import run_all_tests as test_pipeline


def run_robustvda_test_suite():
    """Run complete test suite for the command-line package"""
    print("=" * 60)
    print("ROBUSTVDA - COMPLETE TEST SUITE")
    print("=" * 60)
    print()

    all_passed = True
    for label, suite in (("Config", test_config), ("Pipeline", test_pipeline)):
        try:
            suite()
            print()
        except Exception as e:
            print(f"❌ {label} tests failed: {e}")
            all_passed = False
            print()

    print("=" * 60)
    if all_passed:
        print("✅ ALL ROBUSTVDA TESTS PASSED!")
        print("CLI tests run under pytest (robustvda/test/test_cli.py).")
    else:
        print("❌ SOME TESTS FAILED")
        print("Please check the errors above.")
    print("=" * 60)

    return all_passed


if __name__ == "__main__":
    success = run_robustvda_test_suite()
    sys.exit(0 if success else 1)
