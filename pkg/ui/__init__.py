"""UI components for widthforge"""
