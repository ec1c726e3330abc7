"""Utility modules for widthforge"""
