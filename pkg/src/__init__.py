"""Walk Teleport Auditor - src package"""
