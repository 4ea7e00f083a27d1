import sys

from src import run

if __name__ == "__main__":
    sys.exit(run())
