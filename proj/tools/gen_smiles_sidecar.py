#!/usr/bin/env python3
"""Regenerates tests/data/smiles_corpus_counts.csv with RDKit as the reference parser.

Usage: python3 tools/gen_smiles_sidecar.py [corpus.smi] [out.csv]
"""
import csv
import sys
from pathlib import Path

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")

root = Path(__file__).resolve().parent.parent
corpus = Path(sys.argv[1]) if len(sys.argv) > 1 else root / "tests/data/smiles_corpus.smi"
out = Path(sys.argv[2]) if len(sys.argv) > 2 else root / "tests/data/smiles_corpus_counts.csv"

rows = []
for line in corpus.read_text().splitlines():
    if not line.strip() or line.startswith("#"):
        continue
    smiles, name = line.split()
    mol = Chem.MolFromSmiles(smiles)
    if mol is None:
        sys.exit(f"RDKit rejects {name}: {smiles}")
    rows.append({
        "name": name,
        "smiles": smiles,
        "atoms": mol.GetNumAtoms(),
        "bonds": mol.GetNumBonds(),
        "total_h": sum(a.GetTotalNumHs() for a in mol.GetAtoms()),
    })

with out.open("w", newline="") as f:
    w = csv.DictWriter(f, fieldnames=["name", "smiles", "atoms", "bonds", "total_h"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
print(f"{len(rows)} molecules -> {out}")
