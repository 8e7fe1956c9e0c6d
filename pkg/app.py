import sys

from src.experiments.run_experiments import cli_main

if __name__ == '__main__':
    sys.exit(cli_main())
