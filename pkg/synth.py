#!/usr/bin/env python
import sys

from source.misc.cli import main


# main entry
if __name__ == '__main__':
    sys.exit(main())
