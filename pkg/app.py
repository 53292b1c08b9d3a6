"""
Source Locator - command-line entry point

Learns transmission rates from historical cascades, then ranks the hidden nodes of a
network as the common source of a set of partially observed cascades.

Usage:
    python app.py simulate --network net.txt --source 0 --count 8 --out cascades.txt
    python app.py infer --cascades train.txt --out inferred.txt
    python app.py locate --network inferred.txt --cascades cascades.txt --top 10
    python app.py evaluate --preset smoke
"""
from src.cli.main import run


if __name__ == "__main__":
    run()
