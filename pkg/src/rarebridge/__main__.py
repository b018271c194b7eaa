from rarebridge.cli import main
import sys
sys.exit(main())
