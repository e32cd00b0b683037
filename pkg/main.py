import sys

from bpsmooth.main import main

if __name__ == '__main__':
    sys.exit(main())
