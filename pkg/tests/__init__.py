"""Unit tests for widthforge"""
