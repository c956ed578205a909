"""Finite matroids, partition-matroid intersection witnesses, and their verification."""
