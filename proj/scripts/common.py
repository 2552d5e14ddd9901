"""Helpers shared by the data-building scripts."""

import csv
import string
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

_PUNCT = str.maketrans({c: " " for c in string.punctuation if c != "'"})


def tokenize(text):
    # mirrors hopwise::text::tokenize
    return text.replace("'", "").translate(_PUNCT).lower().split()


def normalize(text):
    return " ".join(tokenize(text))


def read_tsv(path):
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rows.append(line.split("\t"))
    return rows


def split_command(command):
    """state, action, goal texts of an if-then-because command (first markers)."""
    words = command.split()
    lowered = [w.lower().strip(",") for w in words]
    i = lowered.index("if")
    t = lowered.index("then")
    b = lowered.index("because")
    clean = lambda ws: " ".join(ws).strip(" ,.!?;")
    return clean(words[i + 1:t]), clean(words[t + 1:b]), clean(words[b + 1:])


PRE = {"HasPrerequisite", "Prerequisite", "MotivatedByGoal", "Desires", "CapableOf", "xNeed"}
NEGATION = {"NotCapableOf", "NotIsA"}
