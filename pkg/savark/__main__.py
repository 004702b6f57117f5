import sys

from savark.harness.cli import main

sys.exit(main())
