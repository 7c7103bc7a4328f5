"""
Request and report schemas.
"""
