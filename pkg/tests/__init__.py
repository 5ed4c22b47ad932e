"""Obstruction Machine Tests"""
