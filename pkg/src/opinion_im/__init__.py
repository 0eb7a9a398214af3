"""Evidential positive-opinion influence maximization."""

from opinion_im.belief import BBA, Frame, OMEGA, combine_dempster, feature_to_bba, make_simple_bba
from opinion_im.graph import EdgeEvidence, Message, SocialGraph, build_graph, ingest, score_edges
from opinion_im.influence import InfluenceMode, InfluenceView
from opinion_im.maximize import SeedSelection, brute_force_select, celf_select, greedy_select
from opinion_im.opinion import Lexicon, OpinionDistribution, score_message, user_opinion

__all__ = [
    "BBA",
    "Frame",
    "OMEGA",
    "combine_dempster",
    "feature_to_bba",
    "make_simple_bba",
    "EdgeEvidence",
    "Message",
    "SocialGraph",
    "build_graph",
    "ingest",
    "score_edges",
    "InfluenceMode",
    "InfluenceView",
    "SeedSelection",
    "brute_force_select",
    "celf_select",
    "greedy_select",
    "Lexicon",
    "OpinionDistribution",
    "score_message",
    "user_opinion",
]
