"""Walk Teleport Auditor - CLI package"""
