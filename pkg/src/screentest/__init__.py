"""Screen-type driven GUI test workbench.

Screens are parsed from UI hierarchy dumps, summarised as a 15-number
feature vector, classified into one of seven activity types and tested
with the scenario that belongs to that type.
"""

from screentest.activity import ActivityType, LabeledDataset

__version__ = "0.1.0"

__all__ = ["ActivityType", "LabeledDataset", "__version__"]
