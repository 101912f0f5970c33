import sys
from ergoweights.cli import main

sys.exit(main())
