"""Walk Teleport Auditor - Core package"""
