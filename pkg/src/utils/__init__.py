"""Walk Teleport Auditor - Utils package"""
