"""Committed scenario documents, one per experiment preset"""
