"""Patrol: a toolkit for finding harmful entries in informal BBS text.

The pipeline stages live in sibling modules and are composable on their own:

- ``corpus``      entry records, datasets, fold splitting
- ``lexicons``    the seed lexicon bundle (emotemes, expressions, CVS,
                  vulgarities, emoticons, glyph areas, transliteration)
- ``tokenizer``   dictionary tokenization and romanization
- ``normalizer``  edit-distance matching of slang spellings to canonicals
- ``emoticons``   emoticon extraction and emotion lookup
- ``affect``      two-step emotive analysis with valence shifting
- ``features``    token feature grids and weighting schemes
- ``classifier``  linear SVM, rule screen, and label fusion
- ``ranker``      co-occurrence T-scores and harmfulness ordering
- ``evalkit``     precision/recall/F, cross-validation, annotator agreement
- ``cli``         the ``patrol`` command
- ``service``     the HTTP triage service
"""

__version__ = "0.1.0"
