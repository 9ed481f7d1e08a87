namespace elastica {}
