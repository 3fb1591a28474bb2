from .corpus import CorpusEntry, build, corpus, entry
