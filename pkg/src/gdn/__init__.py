"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.
"""
