import logging


class OODAAgent:
    """Observe → orient → decide → act, wrapped in a status envelope by ``run``."""

    def __init__(self, name):
        self.name = name
        self.logger = logging.getLogger(f"agents.{name}")

    def log(self, message, level=logging.INFO):
        self.logger.log(level, f"[{self.name}] {message}")

    def observe(self, data):
        """Observe phase: validate the input and draw the work items"""
        raise NotImplementedError("Observe method not implemented")

    def orient(self, data):
        """Orient phase: compute on the observed items"""
        raise NotImplementedError("Orient method not implemented")

    def decide(self, data):
        """Decide phase: judge the computed items"""
        raise NotImplementedError("Decide method not implemented")

    def act(self, data):
        """Act phase: assemble the result"""
        raise NotImplementedError("Act method not implemented")

    def run(self, input_data):
        """Execute the full OODA loop with proper error handling"""
        try:
            self.log("Starting OODA loop...", logging.DEBUG)
            if input_data is None:
                self.log("Warning: Empty input data", logging.WARNING)
                return {"status": "warning", "message": "Empty input data", "data": None}

            observed_data = self.observe(input_data)
            oriented_data = self.orient(observed_data)
            decision = self.decide(oriented_data)
            action_result = self.act(decision)

            self.log("OODA loop completed successfully", logging.DEBUG)
            return {"status": "success", "data": action_result}

        except Exception as e:
            self.log(f"Error in OODA loop: {str(e)}", logging.ERROR)
            return {"status": "error", "message": str(e), "error": e, "data": None}
