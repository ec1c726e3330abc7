"""Core modules for widthforge"""
