from dimscale.cli import main
import sys

sys.exit(main())
