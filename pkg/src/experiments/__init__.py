# Experiment command-line entry point
