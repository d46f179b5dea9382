"""molrefine: LLM-driven molecular optimization with nested
validity/property refinement loops, plus the cheminformatics stack it
runs on (SMILES parsing with structured errors, descriptors,
fingerprints, similarity retrieval) and a benchmark harness."""

__version__ = "0.1.0"
