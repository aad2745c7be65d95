from bayesloc.infra.index.faiss_index import Distances, FaissFingerprintIndex

__all__ = [
  "Distances",
  "FaissFingerprintIndex"
]
