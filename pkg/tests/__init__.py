"""
Test suite for Meeting Analyzer
"""
